#include "aggnash/experiments.hpp"

#include <boost/math/distributions/normal.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace aggnash {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

cournot::CournotParams GameSource::params() const {
  if (explicit_params) {
    explicit_params->validate();
    return *explicit_params;
  }
  Rng rng(seed);
  auto p = cournot::sample_params(players, locations, rng);
  p.coupling_relation = coupling;
  return p;
}

void ExperimentConfig::validate() const {
  if (sample_paths < 1) throw Error("sample_paths must be at least 1");
  if (!(confidence_level > 0.0 && confidence_level < 1.0)) {
    throw Error("confidence_level must lie in (0, 1)");
  }
  if (iters < 0) throw Error("iters must be nonnegative");
  for (long c : checkpoints) {
    if (c < 0 || c > iters) throw Error("checkpoints must lie in [0, iters]");
  }
  using R = StepsizeSpec::Rule;
  if (algorithm == Algorithm::sync) {
    if (weights == WeightRule::full_averaging && (dynamic || topology != TopologyKind::complete)) {
      throw Error("full_averaging weights need the static complete graph");
    }
    if (stepsize.rule != R::harmonic && stepsize.rule != R::constant) {
      throw Error("synchronous runs take a harmonic or constant stepsize");
    }
  } else {
    if (dynamic) throw Error("gossip runs use a static graph");
    if (stepsize.rule == R::harmonic) {
      throw Error("gossip runs take update_count, constant or uniform_constant stepsizes");
    }
  }
  if (stepsize.rule == R::uniform_constant && !(stepsize.low > 0.0 && stepsize.low <= stepsize.high)) {
    throw Error("uniform_constant stepsize needs 0 < low ≤ high");
  }
  if (game.players < 1 && !game.explicit_params) throw Error("game needs at least one player");
}

namespace {

std::string relation_name(Relation r) { return r == Relation::eq ? "eq" : "ge"; }

Relation parse_relation(const std::string& s) {
  if (s == "eq") return Relation::eq;
  if (s == "ge") return Relation::ge;
  throw Error("unknown coupling relation '" + s + "'");
}

std::string rule_name(StepsizeSpec::Rule r) {
  switch (r) {
    case StepsizeSpec::Rule::harmonic: return "harmonic";
    case StepsizeSpec::Rule::constant: return "constant";
    case StepsizeSpec::Rule::update_count: return "update_count";
    case StepsizeSpec::Rule::uniform_constant: return "uniform_constant";
  }
  return "?";
}

StepsizeSpec::Rule parse_rule(const std::string& s) {
  if (s == "harmonic") return StepsizeSpec::Rule::harmonic;
  if (s == "constant") return StepsizeSpec::Rule::constant;
  if (s == "update_count") return StepsizeSpec::Rule::update_count;
  if (s == "uniform_constant") return StepsizeSpec::Rule::uniform_constant;
  throw Error("unknown stepsize rule '" + s + "'");
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw Error(std::string(what) + ": expected a nonempty matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols) throw Error(std::string(what) + ": ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
  for (const auto& [k, _] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; })) {
      throw Error(std::string("unknown key '") + k + "' in " + where);
    }
  }
}

}  // namespace

json params_to_json(const cournot::CournotParams& p) {
  json j;
  j["players"] = p.num_players;
  j["locations"] = p.num_locations;
  j["a"] = matrix_to_json(p.a);
  j["b"] = matrix_to_json(p.b);
  j["d"] = vector_to_json(p.d);
  j["cap"] = matrix_to_json(p.cap);
  j["price_curvature"] = vector_to_json(p.price_curvature.size() ? p.price_curvature
                                                                  : Vector::Zero(p.num_locations));
  j["coupling"] = relation_name(p.coupling_relation);
  return j;
}

cournot::CournotParams params_from_json(const json& j) {
  reject_unknown(j, {"players", "locations", "a", "b", "d", "cap", "price_curvature", "coupling"},
                 "game.params");
  cournot::CournotParams p;
  p.a = matrix_from_json(j.at("a"), "a");
  p.b = matrix_from_json(j.at("b"), "b");
  p.cap = matrix_from_json(j.at("cap"), "cap");
  p.d = vector_from_json(j.at("d"));
  p.num_players = j.value("players", static_cast<int>(p.a.rows()));
  p.num_locations = j.value("locations", static_cast<int>(p.a.cols()));
  p.price_curvature = j.contains("price_curvature") ? vector_from_json(j["price_curvature"])
                                                    : Vector::Zero(p.num_locations);
  p.coupling_relation = parse_relation(j.value("coupling", std::string("eq")));
  p.validate();
  return p;
}

std::uint64_t params_hash(const cournot::CournotParams& p) {
  const std::string s = params_to_json(p).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json to_json(const ExperimentConfig& c) {
  json j;
  json g;
  g["seed"] = c.game.seed;
  g["players"] = c.game.players;
  g["locations"] = c.game.locations;
  g["coupling"] = relation_name(c.game.coupling);
  if (c.game.explicit_params) g["params"] = params_to_json(*c.game.explicit_params);
  j["game"] = g;
  j["algorithm"] = c.algorithm == Algorithm::sync ? "sync" : "gossip";
  j["topology"] = to_string(c.topology);
  j["dynamic"] = c.dynamic;
  j["weights"] = to_string(c.weights);
  j["stepsize"] = {{"rule", rule_name(c.stepsize.rule)},
                   {"scale", c.stepsize.scale},
                   {"alpha", c.stepsize.alpha},
                   {"low", c.stepsize.low},
                   {"high", c.stepsize.high}};
  j["iters"] = c.iters;
  j["checkpoints"] = c.checkpoints;
  j["sample_paths"] = c.sample_paths;
  j["confidence_level"] = c.confidence_level;
  j["master_seed"] = c.master_seed;
  j["oracle"] = {{"tol", c.oracle.tol},
                 {"step", c.oracle.step},
                 {"max_iters", c.oracle.max_iters},
                 {"cache_dir", c.oracle.cache_dir}};
  j["concurrence"] = {{"threshold", c.concurrence_threshold}, {"budget", c.concurrence_budget}};
  j["threads"] = c.threads;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"game", "algorithm", "topology", "dynamic", "weights", "stepsize", "iters",
                  "checkpoints", "sample_paths", "confidence_level", "master_seed", "oracle",
                  "concurrence", "threads"},
                 "config");
  ExperimentConfig c;
  if (j.contains("game")) {
    const json& g = j["game"];
    reject_unknown(g, {"seed", "players", "locations", "coupling", "params"}, "game");
    c.game.seed = g.value("seed", c.game.seed);
    c.game.players = g.value("players", c.game.players);
    c.game.locations = g.value("locations", c.game.locations);
    c.game.coupling = parse_relation(g.value("coupling", std::string("eq")));
    if (g.contains("params")) {
      c.game.explicit_params = params_from_json(g["params"]);
      c.game.players = c.game.explicit_params->num_players;
      c.game.locations = c.game.explicit_params->num_locations;
    }
  }
  const std::string algo = j.value("algorithm", std::string("sync"));
  if (algo == "sync") {
    c.algorithm = Algorithm::sync;
  } else if (algo == "gossip") {
    c.algorithm = Algorithm::gossip;
    c.stepsize.rule = StepsizeSpec::Rule::update_count;
    c.stepsize.scale = 9.0;
  } else {
    throw Error("unknown algorithm '" + algo + "'");
  }
  c.topology = parse_topology_kind(j.value("topology", std::string("complete")));
  c.dynamic = j.value("dynamic", false);
  const bool complete_static = c.topology == TopologyKind::complete && !c.dynamic;
  c.weights = j.contains("weights") ? parse_weight_rule(j["weights"].get<std::string>())
              : complete_static     ? WeightRule::full_averaging
                                    : WeightRule::metropolis_half;
  if (j.contains("stepsize")) {
    const json& s = j["stepsize"];
    reject_unknown(s, {"rule", "scale", "alpha", "low", "high"}, "stepsize");
    if (s.contains("rule")) c.stepsize.rule = parse_rule(s["rule"].get<std::string>());
    c.stepsize.scale = s.value("scale", c.stepsize.scale);
    c.stepsize.alpha = s.value("alpha", c.stepsize.alpha);
    c.stepsize.low = s.value("low", c.stepsize.low);
    c.stepsize.high = s.value("high", c.stepsize.high);
  }
  c.iters = j.value("iters", c.iters);
  c.checkpoints = j.value("checkpoints", c.checkpoints);
  c.sample_paths = j.value("sample_paths", c.sample_paths);
  c.confidence_level = j.value("confidence_level", c.confidence_level);
  c.master_seed = j.value("master_seed", c.master_seed);
  if (j.contains("oracle")) {
    const json& o = j["oracle"];
    reject_unknown(o, {"tol", "step", "max_iters", "cache_dir"}, "oracle");
    c.oracle.tol = o.value("tol", c.oracle.tol);
    c.oracle.step = o.value("step", c.oracle.step);
    c.oracle.max_iters = o.value("max_iters", c.oracle.max_iters);
    c.oracle.cache_dir = o.value("cache_dir", c.oracle.cache_dir);
  }
  if (j.contains("concurrence")) {
    const json& o = j["concurrence"];
    reject_unknown(o, {"threshold", "budget"}, "concurrence");
    c.concurrence_threshold = o.value("threshold", c.concurrence_threshold);
    c.concurrence_budget = o.value("budget", c.concurrence_budget);
  }
  c.threads = j.value("threads", c.threads);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Statistics

ErrorStats summarize(long iters, std::vector<double> per_path, double confidence_level) {
  ErrorStats s;
  s.iters = iters;
  const auto n = static_cast<double>(per_path.size());
  if (per_path.empty()) throw Error("summarize: no samples");
  double sum = 0.0;
  for (double e : per_path) sum += e;
  s.mean = sum / n;
  if (per_path.size() > 1) {
    double ss = 0.0;
    for (double e : per_path) ss += (e - s.mean) * (e - s.mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const boost::math::normal_distribution<double> normal;
    const double z = boost::math::quantile(normal, 0.5 * (1.0 + confidence_level));
    s.ci_width = 2.0 * z * sd / std::sqrt(n);
    s.ci_defined = true;
  }
  s.per_path = std::move(per_path);
  return s;
}

MixingSummary mixing_summary(TopologyKind kind, int players) {
  Rng rng(0);
  const GossipModel model(build_topology(kind, players, &rng));
  const MixingReport m = gossip_expected_mixing(model.topology(), model.contact_probs());
  return {model.p_min() / model.p_max(), m.lambda, m.second_eigenvalue_expected_w};
}

// ---------------------------------------------------------------------------
// Runs

Profile equilibrium(const ExperimentConfig& config, const GameInstance& game,
                    const cournot::CournotParams& params) {
  std::optional<OracleCache> cache;
  const std::uint64_t hash = params_hash(params);
  if (!config.oracle.cache_dir.empty()) {
    cache.emplace(config.oracle.cache_dir);
    if (auto hit = cache->load(config.game.seed, hash, game.dims())) return *hit;
  }
  Rng rng(derive_seed(config.game.seed, 0x07ac1e));
  CentralizedOptions opt;
  opt.step = config.oracle.step;
  opt.tol = config.oracle.tol;
  opt.max_iters = config.oracle.max_iters;
  CentralizedResult r;
  try {
    r = solve_centralized(game, opt, std::nullopt, &rng);
  } catch (const ConvergenceError& e) {
    throw Error(std::string("oracle failed for instance seed ") + std::to_string(config.game.seed) +
                ": " + e.what());
  }
  if (cache) cache->store(config.game.seed, hash, r.x);
  return r.x;
}

namespace {

std::vector<long> checkpoint_list(const ExperimentConfig& c) {
  std::vector<long> cps = c.checkpoints;
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  cps.erase(std::remove(cps.begin(), cps.end(), c.iters), cps.end());
  return cps;
}

GossipStepsize gossip_steps(const StepsizeSpec& s, int n, Rng& rng) {
  switch (s.rule) {
    case StepsizeSpec::Rule::update_count: return UpdateCountSteps{s.scale};
    case StepsizeSpec::Rule::constant: return ConstantSteps{Vector::Constant(n, s.alpha)};
    case StepsizeSpec::Rule::uniform_constant: return draw_constant_steps(n, s.low, s.high, rng);
    case StepsizeSpec::Rule::harmonic: break;
  }
  throw Error("harmonic stepsizes are not defined for gossip");
}

template <class Fn>
void for_each_path(int paths, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, paths);
  if (workers == 1) {
    for (int p = 0; p < paths; ++p) fn(p);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int p = w; p < paths; p += workers) fn(p);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<double> run_path(const ExperimentConfig& config, const GameInstance& game,
                             const Profile& x_star, int path, PathTrace* trace) {
  Rng rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(path)));
  const int n = game.num_players();
  Profile x0 = sample_profile(game, rng);
  const std::vector<long> cps = checkpoint_list(config);
  std::vector<double> errors;
  errors.reserve(cps.size() + 1);
  std::size_t next_cp = 0;
  auto at_iteration = [&](long done, const NetworkState& state, auto&& disagreement) {
    while (next_cp < cps.size() && cps[next_cp] == done) {
      errors.push_back(error_metric(state.x, x_star));
      ++next_cp;
    }
    if (trace && trace->stride > 0 && done % trace->stride == 0) {
      trace->rows.push_back(
          {static_cast<double>(done), error_metric(state.x, x_star), disagreement()});
    }
  };
  // A checkpoint at 0 refers to the starting point.
  NetworkState start = initial_state(game, x0);
  at_iteration(0, start, [&] { return total_disagreement(start); });

  NetworkState final_state;
  if (config.algorithm == Algorithm::sync) {
    const GraphSchedule schedule =
        config.dynamic ? GraphSchedule::random_trees(n)
                       : GraphSchedule::fixed(build_topology(config.topology, n, &rng), config.weights);
    const StepsizeRule rule = config.stepsize.rule == StepsizeSpec::Rule::constant
                                  ? StepsizeRule::constant(config.stepsize.alpha)
                                  : StepsizeRule::harmonic(config.stepsize.scale);
    SyncOptions opt{config.iters, 0};
    const bool need_hook = !cps.empty() || (trace && trace->stride > 0);
    SyncHook hook;
    if (need_hook) {
      hook = [&](const SyncObservation& o) {
        at_iteration(o.k + 1, o.after, [&] { return o.disagreement; });
      };
    }
    final_state = run_sync(game, std::move(x0), schedule, rule, opt, rng, hook);
  } else {
    const GossipModel model(build_topology(config.topology, n, &rng));
    const GossipStepsize steps = gossip_steps(config.stepsize, n, rng);
    GossipHook hook;
    if (!cps.empty() || trace) {
      hook = [&](const GossipObservation& o) {
        if (trace && trace->record_events) trace->events.push_back(o.event);
        at_iteration(o.k + 1, o.state, [&] { return total_disagreement(o.state); });
      };
    }
    final_state = run_gossip(game, std::move(x0), model, steps, config.iters, rng, hook);
  }
  errors.push_back(error_metric(final_state.x, x_star));
  return errors;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const cournot::CournotParams params = config.game.params();
  const GameInstance game = cournot::build_game(params);
  const Profile x_star = equilibrium(config, game, params);
  const std::vector<long> cps = checkpoint_list(config);

  std::vector<std::vector<double>> per_path(config.sample_paths);
  for_each_path(config.sample_paths, config.threads,
                [&](int p) { per_path[p] = run_path(config, game, x_star, p); });

  ExperimentReport report;
  for (std::size_t c = 0; c <= cps.size(); ++c) {
    std::vector<double> column;
    column.reserve(per_path.size());
    for (const auto& row : per_path) column.push_back(row[c]);
    ErrorStats s = summarize(c < cps.size() ? cps[c] : config.iters, std::move(column),
                             config.confidence_level);
    if (c < cps.size()) {
      report.checkpoints.push_back(std::move(s));
    } else {
      report.final = std::move(s);
    }
  }
  if (config.algorithm == Algorithm::gossip) {
    report.mixing = mixing_summary(config.topology, game.num_players());
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

ConcurrenceReport concurrence_iterations(const ExperimentConfig& config, double threshold) {
  config.validate();
  if (config.algorithm != Algorithm::gossip) throw Error("concurrence is measured on gossip runs");
  if (!(threshold > 0.0)) throw Error("concurrence threshold must be positive");
  const cournot::CournotParams params = config.game.params();
  const GameInstance game = cournot::build_game(params);
  const int n = game.num_players();
  const long budget = config.concurrence_budget;

  std::vector<long> hits(config.sample_paths);
  std::vector<char> censored(config.sample_paths, 0);
  for_each_path(config.sample_paths, config.threads, [&](int p) {
    Rng rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(p)));
    Profile x0 = sample_profile(game, rng);
    const GossipModel model(build_topology(config.topology, n, &rng));
    const GossipStepsize steps = gossip_steps(config.stepsize, n, rng);
    NetworkState state = initial_state(game, std::move(x0));
    Matrix contrib = state.v;  // row i holds h_i(x_i)
    UpdateTracker tracker(n);

    auto concurred = [&] {
      const Eigen::RowVectorXd total = contrib.colwise().sum();
      const double scale = std::max(1.0, total.lpNorm<Eigen::Infinity>());
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        worst = std::max(worst, (n * state.v.row(i) - total).lpNorm<Eigen::Infinity>());
      }
      return worst / scale <= threshold;
    };

    if (concurred()) {
      hits[p] = 0;
      return;
    }
    for (long k = 1; k <= budget; ++k) {
      const Event e = draw_contact(model, rng);
      tracker.record(e);
      double a1, a2;
      if (const auto* u = std::get_if<UpdateCountSteps>(&steps)) {
        a1 = u->scale / static_cast<double>(tracker.count(e.first));
        a2 = u->scale / static_cast<double>(tracker.count(e.second));
      } else {
        const auto& c = std::get<ConstantSteps>(steps);
        a1 = c.alphas[e.first];
        a2 = c.alphas[e.second];
      }
      gossip_step(game, state, e, a1, a2);
      contrib.row(e.first) = game.contribution(e.first, state.x[e.first]).transpose();
      contrib.row(e.second) = game.contribution(e.second, state.x[e.second]).transpose();
      if (concurred()) {
        hits[p] = k;
        return;
      }
    }
    hits[p] = budget;
    censored[p] = 1;
  });

  ConcurrenceReport r;
  r.per_path = hits;
  double sum = 0.0;
  for (long h : hits) sum += static_cast<double>(h);
  r.iterations = static_cast<long>(std::ceil(sum / static_cast<double>(hits.size())));
  r.censored = static_cast<int>(std::count(censored.begin(), censored.end(), 1));
  return r;
}

// ---------------------------------------------------------------------------
// Tables

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (r.size() > width.size()) width.resize(r.size(), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      if (c) out << " | ";
      out << rows[i][c] << std::string(width[c] - rows[i][c].size(), ' ');
    }
    out << '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 3 : 0);
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

namespace {

using Grid = std::vector<std::vector<std::string>>;

void write_table(const std::filesystem::path& dir, const std::string& name, const Grid& rows,
                 std::vector<std::filesystem::path>& written) {
  const auto csv = dir / (name + ".csv");
  const auto txt = dir / (name + ".txt");
  {
    std::ofstream out(csv);
    if (!out) throw Error("cannot write " + csv.string());
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
      out << '\n';
    }
    if (!out) throw Error("write failed for " + csv.string());
  }
  {
    std::ofstream out(txt);
    if (!out) throw Error("cannot write " + txt.string());
    out << render_aligned(rows);
    if (!out) throw Error("write failed for " + txt.string());
  }
  written.push_back(csv);
  written.push_back(txt);
}

std::vector<const ErrorStats*> all_stats(const ExperimentReport& r) {
  std::vector<const ErrorStats*> s;
  for (const auto& c : r.checkpoints) s.push_back(&c);
  s.push_back(&r.final);
  return s;
}

// Rows N, columns k̃, for synchronous runs of one kind.
void sync_tables(const std::vector<LabeledReport>& reports, bool dynamic,
                 const std::filesystem::path& dir, const std::string& err_name,
                 const std::string& ci_name, std::vector<std::filesystem::path>& written) {
  std::set<long> ks = {5000, 10000};
  std::map<int, std::map<long, const ErrorStats*>> cells;
  for (const auto& lr : reports) {
    const auto& c = lr.config;
    if (c.algorithm != Algorithm::sync) continue;
    const bool is_dynamic = c.dynamic;
    const bool is_static_complete = !c.dynamic && c.topology == TopologyKind::complete;
    if (dynamic ? !is_dynamic : !is_static_complete) continue;
    for (const ErrorStats* s : all_stats(lr.report)) {
      ks.insert(s->iters);
      cells[c.game.players][s->iters] = s;
    }
  }
  Grid err{{"N"}}, ci{{"N"}};
  for (long k : ks) {
    err[0].push_back("k=" + std::to_string(k));
    ci[0].push_back("k=" + std::to_string(k));
  }
  for (const auto& [n, row] : cells) {
    std::vector<std::string> e{std::to_string(n)}, w{std::to_string(n)};
    for (long k : ks) {
      auto it = row.find(k);
      e.push_back(it == row.end() ? "" : format_number(it->second->mean));
      w.push_back(it == row.end() ? "" : format_number(it->second->ci_width));
    }
    err.push_back(std::move(e));
    ci.push_back(std::move(w));
  }
  write_table(dir, err_name, err, written);
  write_table(dir, ci_name, ci, written);
}

const std::vector<TopologyKind> kGossipColumns = {TopologyKind::cycle, TopologyKind::wheel,
                                                  TopologyKind::grid, TopologyKind::complete};

}  // namespace

std::vector<std::filesystem::path> emit_tables(const std::vector<LabeledReport>& reports,
                                               const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  sync_tables(reports, true, dir, "table1_sync_dynamic_error", "table2_sync_dynamic_ci", written);
  sync_tables(reports, false, dir, "table3_sync_static_error", "table4_sync_static_ci", written);

  // Gossip: one error table and one interval table per k̃; rows N, columns
  // step mode × topology.
  std::set<long> ks = {50000, 100000};
  // (k, N, diminishing, topology) → stats
  std::map<std::tuple<long, int, bool, TopologyKind>, const ErrorStats*> cells;
  for (const auto& lr : reports) {
    const auto& c = lr.config;
    if (c.algorithm != Algorithm::gossip) continue;
    const bool diminishing = c.stepsize.rule == StepsizeSpec::Rule::update_count;
    for (const ErrorStats* s : all_stats(lr.report)) {
      ks.insert(s->iters);
      cells[{s->iters, c.game.players, diminishing, c.topology}] = s;
    }
  }
  int table_no = 5;
  std::vector<std::pair<long, Grid>> ci_grids;
  for (long k : ks) {
    std::set<int> ns;
    for (const auto& [key, _] : cells) {
      if (std::get<0>(key) == k) ns.insert(std::get<1>(key));
    }
    Grid err{{"N"}}, ci{{"N"}};
    for (bool dim : {false, true}) {
      for (auto t : kGossipColumns) {
        const std::string col = std::string(dim ? "diminishing_" : "constant_") + to_string(t);
        err[0].push_back(col);
        ci[0].push_back(col);
      }
    }
    for (int n : ns) {
      std::vector<std::string> e{std::to_string(n)}, w{std::to_string(n)};
      for (bool dim : {false, true}) {
        for (auto t : kGossipColumns) {
          auto it = cells.find({k, n, dim, t});
          e.push_back(it == cells.end() ? "" : format_number(it->second->mean));
          w.push_back(it == cells.end() ? "" : format_number(it->second->ci_width));
        }
      }
      err.push_back(std::move(e));
      ci.push_back(std::move(w));
    }
    write_table(dir, "table" + std::to_string(table_no++) + "_gossip_error_k" + std::to_string(k),
                err, written);
    ci_grids.emplace_back(k, std::move(ci));
  }
  for (const auto& [k, ci] : ci_grids) {
    write_table(dir, "table" + std::to_string(table_no++) + "_gossip_ci_k" + std::to_string(k), ci,
                written);
  }

  // Mixing and concurrence per topology.
  Grid mix{{"network", "players", "p_min/p_max", "lambda", "second_eigenvalue_EW", "iterations"}};
  std::map<std::pair<int, TopologyKind>, std::vector<std::string>> rows;
  for (const auto& lr : reports) {
    if (!lr.report.mixing) continue;
    const auto& m = *lr.report.mixing;
    auto& row = rows[{lr.config.game.players, lr.config.topology}];
    const std::string its = lr.report.iterations_to_concurrence
                                ? std::to_string(*lr.report.iterations_to_concurrence)
                                : (row.size() > 5 ? row[5] : "");
    row = {to_string(lr.config.topology), std::to_string(lr.config.game.players),
           format_number(m.p_ratio),     format_number(m.lambda),
           format_number(m.second_eigenvalue), its};
  }
  for (int n : [&] {
         std::set<int> s;
         for (const auto& [key, _] : rows) s.insert(key.first);
         return s;
       }()) {
    for (auto t : kGossipColumns) {
      if (auto it = rows.find({n, t}); it != rows.end()) mix.push_back(it->second);
    }
  }
  write_table(dir, "table" + std::to_string(table_no) + "_gossip_mixing", mix, written);
  return written;
}

}  // namespace aggnash
