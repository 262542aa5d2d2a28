#include <doctest.h>

#include "aggnash/graph.hpp"
#include "helpers.hpp"

#include <map>
#include <set>

using namespace aggnash;

TEST_CASE("cycle and wheel edges") {
  const Topology c = build_topology(TopologyKind::cycle, 5);
  const std::vector<Topology::Edge> expect{{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}};
  CHECK(c.edges() == expect);

  const Topology w = build_topology(TopologyKind::wheel, 6);
  CHECK(w.degree(0) == 5);
  for (int i = 1; i < 6; ++i) CHECK(w.has_edge(0, i));
  CHECK(w.edges().size() == 5);
}

TEST_CASE("random connected graphs are spanning trees") {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const Topology g = build_topology(TopologyKind::random_connected, 20, &rng);
    CHECK(g.edges().size() == 19);
    CHECK(g.connected());
  }
  CHECK_THROWS_AS(build_topology(TopologyKind::random_connected, 5), Error);
}

TEST_CASE("grid is 4 by 5 at N=20") {
  const Topology g = build_topology(TopologyKind::grid, 20);
  CHECK(g.edges().size() == 31);
  CHECK(g.connected());
  CHECK_THROWS_AS(build_topology(TopologyKind::grid, 12), Error);
}

TEST_CASE("metropolis weights on a path") {
  const Topology path(3, {{0, 1}, {1, 2}});
  const WeightMatrix w = build_weights(path);
  CHECK(w.delta == doctest::Approx(0.25));
  Matrix expect(3, 3);
  expect << 0.75, 0.25, 0, 0.25, 0.5, 0.25, 0, 0.25, 0.75;
  CHECK((w.w - expect).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(check_weights(w, path).empty());
}

TEST_CASE("two-node complete graph") {
  const WeightMatrix w = build_weights(build_topology(TopologyKind::complete, 2));
  CHECK(w.delta == doctest::Approx(0.5));
  CHECK((w.w.array() - 0.5).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("weights are doubly stochastic on every topology") {
  Rng rng(9);
  for (auto kind : {TopologyKind::cycle, TopologyKind::wheel, TopologyKind::grid,
                    TopologyKind::complete, TopologyKind::random_connected}) {
    const Topology t = build_topology(kind, 20, &rng);
    const WeightMatrix w = build_weights(t);
    CHECK(check_weights(w, t).empty());
    CHECK((w.w.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK((w.w.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  }
  const Topology k = build_topology(TopologyKind::complete, 7);
  const WeightMatrix full = build_weights(k, WeightRule::full_averaging);
  CHECK(check_weights(full, k).empty());
  CHECK_THROWS_AS(build_weights(build_topology(TopologyKind::cycle, 7), WeightRule::full_averaging), Error);
}

TEST_CASE("Q-connectivity") {
  const Topology a(4, {{0, 1}, {2, 3}});
  const Topology b(4, {{1, 2}});
  CHECK(check_q_connectivity({a, b, a, b}, 2));
  CHECK_FALSE(check_q_connectivity({a, b, a, b}, 1));
  const Topology k = build_topology(TopologyKind::complete, 4);
  CHECK(check_q_connectivity({k, k, k}, 1));
  const Topology isolated(4, {{0, 1}, {1, 2}});
  for (int q = 1; q <= 3; ++q) CHECK_FALSE(check_q_connectivity({isolated, isolated, isolated}, q));
}

TEST_CASE("transition bound constants") {
  const auto p = transition_bound_params(2, 1, 0.5);
  CHECK(p.beta == doctest::Approx(0.96875).epsilon(1e-15));
  CHECK(p.theta == doctest::Approx(1.0 / (0.96875 * 0.96875)).epsilon(1e-15));
  CHECK(p.theta == doctest::Approx(1.06560).epsilon(1e-4));
}

TEST_CASE("transition bound holds on one complete step and on random sequences") {
  const Topology k = build_topology(TopologyKind::complete, 5);
  const WeightMatrix w = build_weights(k);
  CHECK(transition_bound_check({k}, {w}, 1, w.delta).max_violation <= 0.0);

  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    std::vector<Topology> seq;
    std::vector<WeightMatrix> ws;
    double delta = 1.0;
    for (int s = 0; s < 20; ++s) {
      seq.push_back(build_topology(TopologyKind::random_connected, 6, &rng));
      ws.push_back(build_weights(seq.back()));
      delta = std::min(delta, ws.back().delta);
    }
    CHECK(transition_bound_check(seq, ws, 1, delta).max_violation <= 0.0);
  }
}

TEST_CASE("gossip event matrix") {
  const Matrix w = gossip_event_matrix(4, 1, 3);
  CHECK((w - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((w * w - w).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(w(1, 3) == 0.5);
  CHECK(w(0, 0) == 1.0);
}

TEST_CASE("expected gossip mixing") {
  SUBCASE("two nodes average fully") {
    const Topology t = build_topology(TopologyKind::complete, 2);
    CHECK(gossip_expected_mixing(t, uniform_contact_probs(t)).lambda == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("mixing table ordering and cycle value") {
    std::map<TopologyKind, double> lam;
    for (auto kind : {TopologyKind::cycle, TopologyKind::wheel, TopologyKind::grid, TopologyKind::complete}) {
      const Topology t = build_topology(kind, 20);
      lam[kind] = gossip_expected_mixing(t, uniform_contact_probs(t)).lambda;
    }
    CHECK(lam[TopologyKind::complete] < lam[TopologyKind::wheel]);
    CHECK(lam[TopologyKind::wheel] < lam[TopologyKind::grid]);
    CHECK(lam[TopologyKind::grid] < lam[TopologyKind::cycle]);
    CHECK(std::abs(lam[TopologyKind::cycle] - 0.9994) <= 5e-3);
  }
  SUBCASE("lambda matches the second eigenvalue of E[W]") {
    const Topology t = build_topology(TopologyKind::wheel, 9);
    const auto m = gossip_expected_mixing(t, uniform_contact_probs(t));
    CHECK(m.lambda == doctest::Approx(m.second_eigenvalue_expected_w).epsilon(1e-12));
  }
}

TEST_CASE("update probabilities") {
  const Topology w = build_topology(TopologyKind::wheel, 20);
  const Vector p = update_probabilities(w, uniform_contact_probs(w));
  CHECK(p.sum() == doctest::Approx(2.0));
  CHECK(p.minCoeff() / p.maxCoeff() == doctest::Approx(1.0 / 19.0));
  Matrix bad = uniform_contact_probs(w);
  bad(1, 0) += 0.1;
  CHECK_THROWS_AS(validate_contact_probs(w, bad), Error);
}

TEST_CASE("parsing names") {
  CHECK(parse_topology_kind("grid") == TopologyKind::grid);
  CHECK(to_string(TopologyKind::wheel) == "wheel");
  CHECK_THROWS_AS(parse_topology_kind("torus"), Error);
  CHECK(parse_weight_rule("full_averaging") == WeightRule::full_averaging);
}

TEST_CASE("topology validation") {
  CHECK_THROWS_AS(Topology(3, {{0, 0}}), Error);
  CHECK_THROWS_AS(Topology(3, {{0, 3}}), Error);
  CHECK(Topology(3, {{1, 0}, {0, 1}}).edges().size() == 1);
}
