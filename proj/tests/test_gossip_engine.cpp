#include <doctest.h>

#include "aggnash/cournot.hpp"
#include "aggnash/gossip_engine.hpp"
#include "helpers.hpp"

#include <map>
#include <sstream>

using namespace aggnash;
using testing::vec;

TEST_CASE("two nodes contact each other with equal odds") {
  const GossipModel m(build_topology(TopologyKind::complete, 2));
  Rng rng(30);
  int first_zero = 0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) {
    const Event e = draw_contact(m, rng);
    CHECK(e.first != e.second);
    first_zero += e.first == 0;
  }
  CHECK(std::abs(first_zero / double(draws) - 0.5) < 3.0 * std::sqrt(0.25 / draws));
}

TEST_CASE("event frequencies match the contact model") {
  const Topology t = build_topology(TopologyKind::wheel, 6);
  Matrix p = uniform_contact_probs(t);
  // Skew the hub's contacts.
  p.row(0).setZero();
  p(0, 1) = 0.5;
  p(0, 2) = 0.2;
  p(0, 3) = 0.1;
  p(0, 4) = 0.1;
  p(0, 5) = 0.1;
  const GossipModel m(t, p);
  Rng rng(31);
  std::map<std::pair<int, int>, long> counts;
  const long draws = 1'000'000;
  for (long k = 0; k < draws; ++k) {
    const Event e = draw_contact(m, rng);
    CHECK(t.has_edge(e.first, e.second));
    ++counts[{e.first, e.second}];
  }
  for (int i = 0; i < 6; ++i) {
    for (int j : t.neighbors(i)) {
      const double prob = p(i, j) / 6.0;
      const double se = std::sqrt(prob * (1 - prob) / draws);
      CHECK(std::abs(counts[{i, j}] / double(draws) - prob) <= 3.0 * se + 1e-12);
    }
  }
}

TEST_CASE("direct and matrix forms agree bit for bit") {
  Rng rng(32);
  const auto params = cournot::sample_params(6, 2, rng);
  const GameInstance g = cournot::build_game(params);
  const GossipModel m(build_topology(TopologyKind::cycle, 6));
  NetworkState s = initial_state(g, sample_profile(g, rng));
  for (int t = 0; t < 200; ++t) {
    const Event e = draw_contact(m, rng);
    Vector alphas = Vector::Zero(6);
    alphas[e.first] = 0.01 * (1 + t % 3);
    alphas[e.second] = 0.02;
    const NetworkState viaw = gossip_step_matrix_form(g, s, e, alphas);
    NetworkState direct = s;
    gossip_step(g, direct, e, alphas[e.first], alphas[e.second]);
    for (int i = 0; i < 6; ++i) CHECK(direct.x[i] == viaw.x[i]);
    CHECK(direct.v == viaw.v);
    s = direct;
  }
}

TEST_CASE("zero steps average the pair and touch nobody else") {
  Rng rng(33);
  const auto params = cournot::sample_params(5, 2, rng);
  const GameInstance g = cournot::build_game(params);
  const NetworkState s0 = initial_state(g, sample_profile(g, rng));
  NetworkState s = s0;
  gossip_step(g, s, {1, 3}, 0.0, 0.0);
  CHECK(s.v.row(1) == (0.5 * (s0.v.row(1) + s0.v.row(3))));
  CHECK(s.v.row(1) == s.v.row(3));
  for (int i : {0, 2, 4}) {
    CHECK(s.x[i] == s0.x[i]);
    CHECK(s.v.row(i) == s0.v.row(i));
  }
  CHECK((s.v.colwise().sum() - s0.v.colwise().sum()).cwiseAbs().maxCoeff() <= 1e-12);

  NetworkState moved = s0;
  gossip_step(g, moved, {1, 3}, 0.05, 0.05);
  for (int i : {0, 2, 4}) {
    CHECK(moved.x[i] == s0.x[i]);
    CHECK(moved.v.row(i) == s0.v.row(i));
  }
  CHECK(conservation_residual(g, moved) <= 1e-9);
}

TEST_CASE("update counts drive the stepsize") {
  const GameInstance lin = testing::linear_scalar_game({3, 3, 3}, {0, 0, 0}, {-1, -1, -1}, 0.0, 5.0);
  const GossipModel m(build_topology(TopologyKind::complete, 3));
  Rng rng(34);
  std::vector<Event> events;
  std::vector<std::vector<long>> gamma;
  std::vector<std::pair<double, double>> steps;
  run_gossip(lin, sample_profile(lin, rng), m, UpdateCountSteps{2.0}, 50, rng,
             [&](const GossipObservation& o) {
               events.push_back(o.event);
               gamma.push_back(o.tracker.counts());
               steps.emplace_back(o.alpha_first, o.alpha_second);
             });
  std::vector<long> count(3, 0);
  for (std::size_t k = 0; k < events.size(); ++k) {
    ++count[events[k].first];
    ++count[events[k].second];
    CHECK(gamma[k] == count);
    CHECK(steps[k].first == doctest::Approx(2.0 / count[events[k].first]));
    CHECK(steps[k].second == doctest::Approx(2.0 / count[events[k].second]));
  }
}

TEST_CASE("counts at ticks one and three") {
  UpdateTracker t(3);
  t.record({0, 1});
  t.record({1, 2});
  t.record({2, 0});
  CHECK(t.count(0) == 2);
  CHECK(1.0 / t.count(0) == 0.5);
}

TEST_CASE("constant steps and trace output") {
  Rng rng(35);
  const ConstantSteps c = draw_constant_steps(20, 5e-3, 1e-2, rng);
  CHECK(c.alphas.minCoeff() >= 5e-3);
  CHECK(c.alphas.maxCoeff() <= 1e-2);
  std::ostringstream out;
  write_event_trace(out, {{0, 1}, {2, 1}});
  CHECK(out.str() == "k,I,J\n0,0,1\n1,2,1\n");
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(GossipModel(Topology(3, {{0, 1}})), Error);
  const GossipModel w(build_topology(TopologyKind::wheel, 20));
  CHECK(w.p_min() / w.p_max() == doctest::Approx(1.0 / 19.0));
  CHECK(w.phat() == doctest::Approx(1.0 + 1.0 / 19.0));
}
