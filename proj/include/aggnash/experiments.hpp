#pragma once

#include "aggnash/cournot.hpp"
#include "aggnash/gossip_engine.hpp"
#include "aggnash/oracle.hpp"
#include "aggnash/sync_engine.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace aggnash {

enum class Algorithm { sync, gossip };

struct GameSource {
  /// Instance seed; parameters are drawn from it unless `explicit_params` is set.
  std::uint64_t seed = 1;
  int players = 20;
  int locations = 10;
  Relation coupling = Relation::eq;
  std::optional<cournot::CournotParams> explicit_params;

  cournot::CournotParams params() const;
};

struct StepsizeSpec {
  enum class Rule {
    harmonic,          // sync: α_k = scale/(k+1)
    constant,          // sync: α_k = alpha; gossip: every agent uses alpha
    update_count,      // gossip: α_{k,i} = scale/Γ_k(i)
    uniform_constant,  // gossip: α_i ∼ U(low, high) drawn once per path
  };
  Rule rule = Rule::harmonic;
  double scale = 1.0;
  double alpha = 0.01;
  double low = 5e-3;
  double high = 1e-2;
};

struct OracleSpec {
  double tol = 1e-12;
  double step = 0.0;  // zero: default_oracle_step
  long max_iters = 1'000'000;
  std::string cache_dir;  // empty: no cache
};

struct ExperimentConfig {
  GameSource game;
  Algorithm algorithm = Algorithm::sync;
  TopologyKind topology = TopologyKind::complete;
  /// Synchronous only: a fresh random spanning tree every iteration.
  bool dynamic = false;
  /// Synchronous only. full_averaging requires the static complete graph.
  WeightRule weights = WeightRule::full_averaging;
  StepsizeSpec stepsize;
  long iters = 5000;
  /// Iteration counts at which the error is also recorded (≤ iters).
  std::vector<long> checkpoints;
  int sample_paths = 50;
  double confidence_level = 0.90;
  std::uint64_t master_seed = 2024;
  OracleSpec oracle;
  double concurrence_threshold = 1e-3;
  long concurrence_budget = 200'000;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json params_to_json(const cournot::CournotParams& p);
cournot::CournotParams params_from_json(const nlohmann::json& j);
/// FNV-1a over the canonical serialization.
std::uint64_t params_hash(const cournot::CournotParams& p);

struct ErrorStats {
  long iters = 0;
  double mean = 0.0;
  double ci_width = 0.0;
  /// False when there is a single path and no spread can be estimated.
  bool ci_defined = false;
  std::vector<double> per_path;
};

/// Normal-approximation interval width 2·z_{(1+c)/2}·s/√n.
ErrorStats summarize(long iters, std::vector<double> per_path, double confidence_level);

struct MixingSummary {
  double p_ratio;  // p_min / p_max
  double lambda;
  double second_eigenvalue;
};

MixingSummary mixing_summary(TopologyKind kind, int players);

struct ExperimentReport {
  ErrorStats final;                // at config.iters
  std::vector<ErrorStats> checkpoints;
  std::optional<MixingSummary> mixing;  // gossip runs
  std::optional<long> iterations_to_concurrence;
  double runtime_seconds = 0.0;

  double mean_error() const { return final.mean; }
  double ci_width() const { return final.ci_width; }
  const std::vector<double>& per_path_errors() const { return final.per_path; }
};

/// x* for the configured instance, through the cache when one is configured.
Profile equilibrium(const ExperimentConfig& config, const GameInstance& game,
                    const cournot::CournotParams& params);

struct PathTrace {
  /// (k, error, disagreement) every `stride` iterations when stride > 0.
  long stride = 0;
  std::vector<std::array<double, 3>> rows;
  /// Gossip ticks (k, I, J) when requested.
  bool record_events = false;
  std::vector<Event> events;
};

/// One sample path. Returns the error at each checkpoint followed by the
/// final error.
std::vector<double> run_path(const ExperimentConfig& config, const GameInstance& game,
                             const Profile& x_star, int path, PathTrace* trace = nullptr);

/// Deterministic in (config, master_seed); paths may run on several threads.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct ConcurrenceReport {
  /// ⌈mean over paths⌉ of the first tick meeting the threshold.
  long iterations = 0;
  std::vector<long> per_path;
  /// Paths that never met the threshold (their entry is the budget).
  int censored = 0;
};

ConcurrenceReport concurrence_iterations(const ExperimentConfig& config, double threshold);

/// One row of results keyed by the configuration that produced it.
struct LabeledReport {
  ExperimentConfig config;
  ExperimentReport report;
};

/// Writes one CSV and one aligned-text file per table into `dir` and returns
/// the paths written. Numbers use 17 significant digits.
std::vector<std::filesystem::path> emit_tables(const std::vector<LabeledReport>& reports,
                                               const std::filesystem::path& dir);

std::string format_number(double v);
/// Aligned plain-text rendering of a CSV-style table.
std::string render_aligned(const std::vector<std::vector<std::string>>& rows);

}  // namespace aggnash
