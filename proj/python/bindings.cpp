#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "aggnash/analysis.hpp"
#include "aggnash/experiments.hpp"

namespace py = pybind11;
using namespace aggnash;
using nlohmann::json;

namespace {

ExperimentConfig parse_config(const std::string& text) {
  try {
    return config_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

std::string report_to_json(const ExperimentReport& r) {
  auto stats = [](const ErrorStats& s) {
    json j{{"iters", s.iters}, {"mean_error", s.mean}, {"per_path", s.per_path}};
    j["ci_width"] = s.ci_defined ? json(s.ci_width) : json(nullptr);
    return j;
  };
  json j;
  j["final"] = stats(r.final);
  j["checkpoints"] = json::array();
  for (const auto& s : r.checkpoints) j["checkpoints"].push_back(stats(s));
  if (r.mixing) {
    j["mixing"] = {{"p_min_over_p_max", r.mixing->p_ratio},
                   {"lambda", r.mixing->lambda},
                   {"second_eigenvalue", r.mixing->second_eigenvalue}};
  }
  j["runtime_seconds"] = r.runtime_seconds;
  return j.dump();
}

PlayerSpec make_player(const Vector& lower, const Vector& upper, GradientMap gradient,
                       std::optional<AggregateMap> aggregate) {
  return {FeasibleSet::box(lower, upper), std::move(gradient), aggregate ? *aggregate : AggregateMap{}};
}

}  // namespace

PYBIND11_MODULE(_aggnash, m) {
  m.doc() = "Distributed Nash equilibrium seeking for aggregative games";

  py::register_exception<Error>(m, "AggnashError", PyExc_RuntimeError);

  py::class_<FeasibleSet>(m, "FeasibleSet")
      .def_static("box", &FeasibleSet::box, py::arg("lower"), py::arg("upper"))
      .def_static(
          "coupled",
          [](const Vector& lower, const Vector& upper, const Vector& a, const std::string& relation, double rhs) {
            if (relation != "eq" && relation != "ge") throw Error("relation must be 'eq' or 'ge'");
            return FeasibleSet::coupled(lower, upper, {a, relation == "eq" ? Relation::eq : Relation::ge, rhs});
          },
          py::arg("lower"), py::arg("upper"), py::arg("a"), py::arg("relation") = "eq", py::arg("rhs") = 0.0)
      .def_property_readonly("dim", &FeasibleSet::dim)
      .def("project", &FeasibleSet::project, py::arg("z"))
      .def("contains", &FeasibleSet::contains, py::arg("z"), py::arg("tol") = 1e-9);

  py::class_<GameInstance>(m, "Game")
      .def(py::init([](const std::vector<std::tuple<Vector, Vector, GradientMap, std::optional<AggregateMap>>>& players,
                       int aggregate_dim) {
             std::vector<PlayerSpec> specs;
             for (const auto& [lo, hi, f, h] : players) specs.push_back(make_player(lo, hi, f, h));
             return GameInstance(std::move(specs), aggregate_dim);
           }),
           py::arg("players"), py::arg("aggregate_dim"),
           "players: list of (lower, upper, gradient(x_i, u), aggregate(x_i) or None)")
      .def_property_readonly("num_players", &GameInstance::num_players)
      .def_property_readonly("aggregate_dim", &GameInstance::aggregate_dim)
      .def_property_readonly("dims", &GameInstance::dims)
      .def("aggregate", [](const GameInstance& g, const Profile& x) { return aggregate(g, x); }, py::arg("x"))
      .def("phi", [](const GameInstance& g, const Profile& x) { return evaluate_phi(g, x); }, py::arg("x"))
      .def("project", [](const GameInstance& g, const Profile& x) { return project_profile(g, x); }, py::arg("x"))
      .def("sample", [](const GameInstance& g, std::uint64_t seed) {
        Rng rng(seed);
        return sample_profile(g, rng);
      }, py::arg("seed"));

  m.def(
      "cournot_game",
      [](const std::string& params_json) { return cournot::build_game(params_from_json(json::parse(params_json))); },
      py::arg("params_json"));
  m.def(
      "cournot_params",
      [](int players, int locations, std::uint64_t seed) {
        Rng rng(seed);
        return params_to_json(cournot::sample_params(players, locations, rng)).dump();
      },
      py::arg("players"), py::arg("locations"), py::arg("seed"));

  m.def(
      "solve_centralized",
      [](const GameInstance& g, double tol, long max_iters, double step) {
        CentralizedOptions opt;
        opt.tol = tol;
        opt.max_iters = max_iters;
        opt.step = step;
        const auto r = solve_centralized(g, opt);
        return py::make_tuple(r.x, r.iterations, r.residual);
      },
      py::arg("game"), py::arg("tol") = 1e-12, py::arg("max_iters") = 1'000'000, py::arg("step") = 0.0);
  m.def("vi_residual", &vi_residual, py::arg("game"), py::arg("x"), py::arg("step") = 1.0);
  m.def("error_metric", &error_metric, py::arg("x"), py::arg("x_star"));

  m.def(
      "topology_edges",
      [](const std::string& kind, int n, std::uint64_t seed) {
        Rng rng(seed);
        return build_topology(parse_topology_kind(kind), n, &rng).edges();
      },
      py::arg("kind"), py::arg("n"), py::arg("seed") = 0);
  m.def(
      "weights",
      [](const std::string& kind, int n, const std::string& rule, std::uint64_t seed) {
        Rng rng(seed);
        return build_weights(build_topology(parse_topology_kind(kind), n, &rng), parse_weight_rule(rule)).w;
      },
      py::arg("kind"), py::arg("n"), py::arg("rule") = "metropolis_half", py::arg("seed") = 0);
  m.def(
      "mixing",
      [](const std::string& kind, int n) {
        const auto s = mixing_summary(parse_topology_kind(kind), n);
        return py::dict(py::arg("p_min_over_p_max") = s.p_ratio, py::arg("lambda_") = s.lambda,
                        py::arg("second_eigenvalue") = s.second_eigenvalue);
      },
      py::arg("kind"), py::arg("n"));

  m.def(
      "run_sync",
      [](const GameInstance& g, const Profile& x0, const std::string& kind, double step_scale, long iters,
         std::uint64_t seed) {
        Rng rng(seed);
        const int n = g.num_players();
        const GraphSchedule sched = kind == "dynamic"
                                        ? GraphSchedule::random_trees(n)
                                        : GraphSchedule::fixed(build_topology(parse_topology_kind(kind), n, &rng));
        const auto s = run_sync(g, x0, sched, StepsizeRule::harmonic(step_scale), {iters, 0}, rng);
        return py::make_tuple(s.x, s.v);
      },
      py::arg("game"), py::arg("x0"), py::arg("topology") = "complete", py::arg("step_scale") = 1.0,
      py::arg("iters") = 1000, py::arg("seed") = 0);
  m.def(
      "run_gossip",
      [](const GameInstance& g, const Profile& x0, const std::string& kind, std::optional<Vector> constant_steps,
         double step_scale, long iters, std::uint64_t seed) {
        Rng rng(seed);
        const GossipModel model(build_topology(parse_topology_kind(kind), g.num_players(), &rng));
        const GossipStepsize steps = constant_steps ? GossipStepsize{ConstantSteps{*constant_steps}}
                                                    : GossipStepsize{UpdateCountSteps{step_scale}};
        const auto s = run_gossip(g, x0, model, steps, iters, rng);
        return py::make_tuple(s.x, s.v);
      },
      py::arg("game"), py::arg("x0"), py::arg("topology") = "complete", py::arg("constant_steps") = py::none(),
      py::arg("step_scale") = 1.0, py::arg("iters") = 10000, py::arg("seed") = 0);

  m.def(
      "run_experiment_json",
      [](const std::string& config) {
        const ExperimentConfig c = parse_config(config);
        ExperimentReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(c);
        }
        return report_to_json(r);
      },
      py::arg("config"));
  m.def(
      "concurrence_json",
      [](const std::string& config, double threshold) {
        const ExperimentConfig c = parse_config(config);
        ConcurrenceReport r;
        {
          py::gil_scoped_release release;
          r = concurrence_iterations(c, threshold);
        }
        return py::make_tuple(r.iterations, r.per_path, r.censored);
      },
      py::arg("config"), py::arg("threshold"));

  m.def(
      "lemma4_bounds",
      [](int q, double delta, int n, double big_m, double c, const std::vector<double>& alphas) {
        return lemma4_bounds(q, delta, n, big_m, c, alphas);
      },
      py::arg("q"), py::arg("delta"), py::arg("num_players"), py::arg("M"), py::arg("C"), py::arg("alphas"));
  m.def(
      "prop4_bound",
      [](double mu, double c, double b, int n, int big_n, double lambda, double p_min, double p_max, double a_min,
         double a_max, double max_l) {
        const auto r = prop4_bound({mu, c, b, n, big_n, lambda, p_min, p_max, a_min, a_max, max_l});
        return py::make_tuple(r.q, r.bound);
      },
      py::arg("mu"), py::arg("C"), py::arg("B"), py::arg("n"), py::arg("N"), py::arg("lambda_"), py::arg("p_min"),
      py::arg("p_max"), py::arg("alpha_min"), py::arg("alpha_max"), py::arg("max_L"));
  m.def("transition_bound_params", [](int n, int q, double delta) {
    const auto p = transition_bound_params(n, q, delta);
    return py::make_tuple(p.theta, p.beta);
  }, py::arg("num_players"), py::arg("q"), py::arg("delta"));
}
