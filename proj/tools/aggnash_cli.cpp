#include "aggnash/analysis.hpp"
#include "aggnash/experiments.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

using namespace aggnash;
using nlohmann::json;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> paths;
  std::optional<long> iters;
  std::optional<int> threads;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config, "JSON config file (object or array of objects)")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "master seed for sample paths");
  app->add_option("--paths", o.paths, "number of sample paths")->check(CLI::PositiveNumber);
  app->add_option("--iters", o.iters, "iterations (ticks for gossip)")->check(CLI::NonNegativeNumber);
  app->add_option("--threads", o.threads, "worker threads (0: all cores)");
}

std::vector<ExperimentConfig> load_configs(const Overrides& o) {
  std::vector<ExperimentConfig> out;
  if (o.config.empty()) {
    out.emplace_back();
  } else {
    std::ifstream in(o.config);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error("config " + o.config + ": " + e.what());
    }
    try {
      if (j.is_array()) {
        for (const auto& item : j) out.push_back(config_from_json(item));
      } else {
        out.push_back(config_from_json(j));
      }
    } catch (const json::exception& e) {
      throw Error("config " + o.config + ": " + e.what());
    }
  }
  for (auto& c : out) {
    if (o.seed) c.master_seed = *o.seed;
    if (o.paths) c.sample_paths = *o.paths;
    if (o.iters) {
      c.iters = *o.iters;
      std::erase_if(c.checkpoints, [&](long k) { return k > c.iters; });
    }
    if (o.threads) c.threads = *o.threads;
    c.validate();
  }
  return out;
}

json stats_json(const ErrorStats& s) {
  json j{{"iters", s.iters}, {"mean_error", s.mean}};
  j["ci_width"] = s.ci_defined ? json(s.ci_width) : json(nullptr);
  return j;
}

json report_json(const ExperimentConfig& c, const ExperimentReport& r) {
  json j;
  j["config"] = to_json(c);
  j["final"] = stats_json(r.final);
  j["checkpoints"] = json::array();
  for (const auto& s : r.checkpoints) j["checkpoints"].push_back(stats_json(s));
  if (r.mixing) {
    j["mixing"] = {{"p_min_over_p_max", r.mixing->p_ratio},
                   {"lambda", r.mixing->lambda},
                   {"second_eigenvalue", r.mixing->second_eigenvalue}};
  }
  if (r.iterations_to_concurrence) j["iterations_to_concurrence"] = *r.iterations_to_concurrence;
  j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

void write_trace(const ExperimentConfig& c, const std::string& trajectory, const std::string& events,
                 long stride) {
  const auto params = c.game.params();
  const GameInstance game = cournot::build_game(params);
  const Profile x_star = equilibrium(c, game, params);
  PathTrace trace;
  trace.stride = trajectory.empty() ? 0 : stride;
  trace.record_events = !events.empty() && c.algorithm == Algorithm::gossip;
  run_path(c, game, x_star, 0, &trace);
  if (!trajectory.empty()) {
    std::ofstream out(trajectory);
    if (!out) throw Error("cannot write " + trajectory);
    out << "k,error,disagreement\n";
    for (const auto& r : trace.rows) {
      out << static_cast<long>(r[0]) << ',' << format_number(r[1]) << ',' << format_number(r[2]) << '\n';
    }
  }
  if (trace.record_events) {
    std::ofstream out(events);
    if (!out) throw Error("cannot write " + events);
    write_event_trace(out, trace.events);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed Nash equilibrium seeking in aggregative games"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string out_dir, trajectory, events;
  long stride = 100;
  bool with_concurrence = false;
  auto* run = app.add_subcommand("run", "run experiments and report error statistics");
  add_common(run, run_o);
  run->add_option("--out", out_dir, "directory for CSV and text tables");
  run->add_option("--trajectory", trajectory, "CSV of (k, error, disagreement) for path 0");
  run->add_option("--stride", stride, "trajectory sampling stride")->check(CLI::PositiveNumber);
  run->add_option("--events", events, "CSV of gossip ticks (k, I, J) for path 0");
  run->add_flag("--concurrence", with_concurrence, "also measure iterations to concurrence (gossip)");

  Overrides conc_o;
  std::optional<std::string> conc_topology;
  std::optional<double> threshold;
  auto* conc = app.add_subcommand("concurrence", "ticks until every estimate matches the aggregate");
  add_common(conc, conc_o);
  conc->add_option("--topology", conc_topology, "cycle, wheel, grid or complete");
  conc->add_option("--threshold", threshold, "relative tolerance")->check(CLI::PositiveNumber);

  std::string lam_topology = "cycle";
  int lam_players = 20;
  auto* lam = app.add_subcommand("lambda", "gossip mixing constants of a static graph");
  lam->add_option("--topology", lam_topology, "cycle, wheel, grid or complete");
  lam->add_option("--players", lam_players, "number of agents")->check(CLI::Range(2, 100000));

  Overrides orc_o;
  std::string orc_out;
  auto* orc = app.add_subcommand("oracle", "solve for the equilibrium with full information");
  add_common(orc, orc_o);
  orc->add_option("--out", orc_out, "write x* as CSV (player, coordinate, value)");

  auto* bounds = app.add_subcommand("bounds", "evaluate the analytic error bounds");
  bounds->require_subcommand(1);
  int b_q = 1, b_players = 2;
  double b_delta = 0.5, b_m = 1.0, b_c = 1.0, b_scale = 1.0;
  long b_k = 10;
  auto* l4 = bounds->add_subcommand("disagreement", "estimate disagreement bound under harmonic steps");
  l4->add_option("--q", b_q, "connectivity window")->check(CLI::PositiveNumber);
  l4->add_option("--delta", b_delta, "weight lower bound")->check(CLI::Range(0.0, 1.0));
  l4->add_option("--players", b_players)->check(CLI::PositiveNumber);
  l4->add_option("--M", b_m, "decision norm bound");
  l4->add_option("--C", b_c, "gradient bound");
  l4->add_option("--scale", b_scale, "harmonic step scale c in c/k");
  l4->add_option("--k", b_k, "last iteration to report")->check(CLI::NonNegativeNumber);

  Prop4Constants pc{};
  pc.n = 1;
  pc.N = 2;
  auto* p4 = bounds->add_subcommand("constant-step", "mean-square error bound for constant gossip steps");
  p4->add_option("--mu", pc.mu)->required();
  p4->add_option("--C", pc.C)->required();
  p4->add_option("--B", pc.B)->required();
  p4->add_option("--n", pc.n);
  p4->add_option("--N", pc.N);
  p4->add_option("--lambda", pc.lambda)->required();
  p4->add_option("--p-min", pc.p_min)->required();
  p4->add_option("--p-max", pc.p_max)->required();
  p4->add_option("--alpha-min", pc.alpha_min)->required();
  p4->add_option("--alpha-max", pc.alpha_max)->required();
  p4->add_option("--max-L", pc.max_L)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto configs = load_configs(run_o);
      std::vector<LabeledReport> reports;
      json all = json::array();
      for (const auto& c : configs) {
        ExperimentReport r = run_experiment(c);
        if (with_concurrence && c.algorithm == Algorithm::gossip) {
          r.iterations_to_concurrence = concurrence_iterations(c, c.concurrence_threshold).iterations;
        }
        all.push_back(report_json(c, r));
        reports.push_back({c, std::move(r)});
      }
      if (!trajectory.empty() || !events.empty()) write_trace(configs.front(), trajectory, events, stride);
      if (!out_dir.empty()) {
        for (const auto& f : emit_tables(reports, out_dir)) std::cerr << "wrote " << f.string() << '\n';
      }
      std::cout << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
    } else if (*conc) {
      auto configs = load_configs(conc_o);
      json all = json::array();
      for (auto& c : configs) {
        if (conc_topology) c.topology = parse_topology_kind(*conc_topology);
        if (c.algorithm != Algorithm::gossip) {
          c.algorithm = Algorithm::gossip;
          c.stepsize = StepsizeSpec{StepsizeSpec::Rule::update_count, 9.0};
        }
        c.validate();
        const double t = threshold.value_or(c.concurrence_threshold);
        const auto r = concurrence_iterations(c, t);
        all.push_back({{"topology", to_string(c.topology)},
                       {"players", c.game.players},
                       {"threshold", t},
                       {"iterations", r.iterations},
                       {"censored_paths", r.censored},
                       {"per_path", r.per_path}});
      }
      std::cout << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
    } else if (*lam) {
      const auto m = mixing_summary(parse_topology_kind(lam_topology), lam_players);
      std::cout << json{{"topology", lam_topology},
                        {"players", lam_players},
                        {"p_min_over_p_max", m.p_ratio},
                        {"lambda", m.lambda},
                        {"second_eigenvalue", m.second_eigenvalue}}
                       .dump(2)
                << '\n';
    } else if (*orc) {
      const auto configs = load_configs(orc_o);
      const auto& c = configs.front();
      const auto params = c.game.params();
      const GameInstance game = cournot::build_game(params);
      const Profile x = equilibrium(c, game, params);
      if (!orc_out.empty()) {
        std::ofstream out(orc_out);
        if (!out) throw Error("cannot write " + orc_out);
        out << "player,coordinate,value\n";
        for (std::size_t i = 0; i < x.size(); ++i) {
          for (Eigen::Index j = 0; j < x[i].size(); ++j) out << i << ',' << j << ',' << format_number(x[i][j]) << '\n';
        }
      }
      const Vector u = aggregate(game, x);
      std::cout << json{{"instance_seed", c.game.seed},
                        {"params_hash", params_hash(params)},
                        {"vi_residual", vi_residual(game, x)},
                        {"aggregate", std::vector<double>(u.data(), u.data() + u.size())}}
                       .dump(2)
                << '\n';
    } else if (*l4) {
      std::vector<double> alphas;
      for (long s = 0; s < b_k; ++s) alphas.push_back(StepsizeRule::harmonic(b_scale).at(s));
      const auto tb = transition_bound_params(b_players, b_q, b_delta);
      const auto v = lemma4_bounds(b_q, b_delta, b_players, b_m, b_c, alphas);
      std::cout << json{{"theta", tb.theta}, {"beta", tb.beta}, {"bound", v}}.dump(2) << '\n';
    } else if (*p4) {
      const auto r = prop4_bound(pc);
      json j{{"q", r.q}, {"bound", r.bound}};
      if (r.equal_steps_bound) j["equal_steps_bound"] = *r.equal_steps_bound;
      if (r.equal_probs_bound) j["equal_probs_bound"] = *r.equal_probs_bound;
      std::cout << j.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
