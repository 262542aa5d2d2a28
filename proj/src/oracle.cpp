#include "aggnash/oracle.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace aggnash {

double default_oracle_step(const GameInstance& game, Rng& rng) {
  const double lip = probe_phi_lipschitz(game, 20, rng);
  const double mu = std::max(0.0, probe_monotonicity(game, 200, rng).estimated_mu);
  if (!(lip + mu > 0.0)) return 1.0;
  return 1.0 / (lip + mu);
}

double vi_residual(const GameInstance& game, const Profile& x, double step) {
  const Profile phi = evaluate_phi(game, x);
  double r = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    r = std::max(r, (x[i] - game.project(i, x[i] - step * phi[i])).lpNorm<Eigen::Infinity>());
  }
  return r;
}

namespace {

Profile midpoint_start(const GameInstance& game) {
  Profile x;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto& s = game.player(i).feasible_set;
    Vector mid = 0.5 * (s.lower() + s.upper());
    for (Eigen::Index c = 0; c < mid.size(); ++c) {
      if (!std::isfinite(mid[c])) mid[c] = std::isfinite(s.lower()[c]) ? s.lower()[c] : 0.0;
    }
    x.push_back(s.project(mid));
  }
  return x;
}

}  // namespace

CentralizedResult solve_centralized(const GameInstance& game, const CentralizedOptions& options,
                                    const std::optional<Profile>& x0, Rng* rng) {
  double step = options.step;
  if (step <= 0.0) {
    Rng local(0x5eed);
    step = default_oracle_step(game, rng ? *rng : local);
  }
  Profile start = x0 ? *x0 : (rng && game.bounded() ? sample_profile(game, *rng) : midpoint_start(game));
  game.check_profile(start);
  start = project_profile(game, start);

  const int n = game.num_players();
  long total = 0;
  // A step that makes the iteration expand, or stalls it, is halved and the
  // run restarted.
  constexpr long kWindow = 2000;
  for (int attempt = 0; attempt < 60; ++attempt) {
    Profile x = start;
    double first_move = -1.0;
    double window_move = -1.0;
    bool diverged = false;
    for (long it = 0; total < options.max_iters; ++it, ++total) {
      const Vector u = aggregate(game, x);
      double move = 0.0;
      Profile next(n);
      for (int i = 0; i < n; ++i) {
        next[i] = game.project(i, x[i] - step * game.gradient(i, x[i], u));
        move = std::max(move, (next[i] - x[i]).lpNorm<Eigen::Infinity>());
      }
      x = std::move(next);
      if (!std::isfinite(move) || (first_move >= 0.0 && move > 1e3 * std::max(first_move, 1e-300))) {
        diverged = true;
        break;
      }
      if (first_move < 0.0) first_move = move;
      if (move <= options.tol) {
        return {std::move(x), total + 1, 0.0, step};
      }
      if (it % kWindow == kWindow - 1) {
        if (window_move >= 0.0 && move > 0.95 * window_move) {
          diverged = true;
          break;
        }
        window_move = move;
      }
    }
    if (!diverged) {
      throw ConvergenceError("centralized projected gradient hit max_iters",
                             vi_residual(game, x, step));
    }
    step *= 0.5;
  }
  throw ConvergenceError("centralized projected gradient diverged for every trial step",
                         std::numeric_limits<double>::infinity());
}

namespace {

// 8-point Gauss–Legendre on [0, 1].
constexpr std::array<double, 8> kNodes = {0.019855071751231856, 0.10166676129318664,
                                          0.2372337950418355,   0.4082826787521751,
                                          0.5917173212478249,   0.7627662049581645,
                                          0.8983332387068134,   0.9801449282487681};
constexpr std::array<double, 8> kWeights = {0.05061426814518813, 0.11119051722668724,
                                            0.15685332293894363, 0.18134189168918100,
                                            0.18134189168918100, 0.15685332293894363,
                                            0.11119051722668724, 0.05061426814518813};

// f_i(y) − f_i(corner) with the other players' contribution fixed at `rest`.
double payoff(const GameInstance& game, int i, const Vector& y, const Vector& corner,
              const Vector& rest) {
  const Vector dir = y - corner;
  if (dir.squaredNorm() == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t q = 0; q < kNodes.size(); ++q) {
    const Vector z = corner + kNodes[q] * dir;
    acc += kWeights[q] * game.gradient(i, z, game.contribution(i, z) + rest).dot(dir);
  }
  return acc;
}

}  // namespace

BruteForceResult brute_force_vi(const GameInstance& game, int points_per_axis, int max_rounds) {
  if (points_per_axis < 2) throw Error("brute_force_vi needs at least two grid points per axis");
  if (game.total_dim() > 4) throw Error("brute_force_vi is limited to total dimension 4");
  const int n = game.num_players();
  BruteForceResult out;
  std::vector<std::vector<Vector>> grids(n);
  for (int i = 0; i < n; ++i) {
    const auto& s = game.player(i).feasible_set;
    if (s.kind() != FeasibleSet::Kind::box || !s.bounded()) {
      throw AssumptionError("brute_force_vi needs compact box feasible sets");
    }
    const int d = s.dim();
    std::vector<int> counts(d);
    double spacing = 0.0;
    long total = 1;
    for (int c = 0; c < d; ++c) {
      const double width = s.upper()[c] - s.lower()[c];
      counts[c] = width > 0.0 ? points_per_axis : 1;
      if (width > 0.0) spacing = std::max(spacing, width / (points_per_axis - 1));
      total *= counts[c];
    }
    out.spacing.push_back(spacing);
    grids[i].reserve(total);
    for (long idx = 0; idx < total; ++idx) {
      Vector p(d);
      long rem = idx;
      for (int c = 0; c < d; ++c) {
        const int k = static_cast<int>(rem % counts[c]);
        rem /= counts[c];
        p[c] = counts[c] == 1 ? s.lower()[c]
                              : s.lower()[c] + (s.upper()[c] - s.lower()[c]) * k / (counts[c] - 1);
      }
      grids[i].push_back(std::move(p));
    }
  }

  std::vector<std::size_t> choice(n);
  Profile x(n);
  for (int i = 0; i < n; ++i) {
    choice[i] = grids[i].size() / 2;
    x[i] = grids[i][choice[i]];
  }
  for (int round = 1; round <= max_rounds; ++round) {
    out.rounds = round;
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      Vector rest = aggregate(game, x) - game.contribution(i, x[i]);
      const Vector corner = game.player(i).feasible_set.lower();
      std::size_t best = choice[i];
      double best_val = payoff(game, i, grids[i][best], corner, rest);
      for (std::size_t g = 0; g < grids[i].size(); ++g) {
        const double val = payoff(game, i, grids[i][g], corner, rest);
        if (val < best_val - 1e-14 * std::max(1.0, std::abs(best_val))) {
          best_val = val;
          best = g;
        }
      }
      if (best != choice[i]) {
        changed = true;
        choice[i] = best;
        x[i] = grids[i][best];
      }
    }
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(x);
  return out;
}

double error_metric(const Profile& x, const Profile& x_star) {
  if (x.size() != x_star.size()) throw Error("error_metric: profiles differ in player count");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != x_star[i].size()) {
      throw DimensionError(static_cast<int>(i), "error_metric: block sizes differ");
    }
    if (x[i].size() == 0) continue;
    num = std::max(num, (x[i] - x_star[i]).lpNorm<Eigen::Infinity>());
    den = std::max(den, x_star[i].lpNorm<Eigen::Infinity>());
  }
  if (den == 0.0) throw Error("error_metric is undefined for an all-zero reference point");
  return num / den;
}

std::filesystem::path OracleCache::path_for(std::uint64_t seed, std::uint64_t params_hash) const {
  char name[64];
  std::snprintf(name, sizeof name, "xstar_%llu_%016llx.csv",
                static_cast<unsigned long long>(seed), static_cast<unsigned long long>(params_hash));
  return dir_ / name;
}

std::optional<Profile> OracleCache::load(std::uint64_t seed, std::uint64_t params_hash,
                                         const std::vector<int>& dims) const {
  std::ifstream in(path_for(seed, params_hash));
  if (!in) return std::nullopt;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  long total = 0;
  for (int d : dims) total += d;
  if (static_cast<long>(values.size()) != total) return std::nullopt;
  return unflatten(Eigen::Map<Vector>(values.data(), total), dims);
}

void OracleCache::store(std::uint64_t seed, std::uint64_t params_hash, const Profile& x) const {
  std::filesystem::create_directories(dir_);
  const auto path = path_for(seed, params_hash);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write oracle cache file " + tmp);
    out << std::setprecision(17);
    const Vector flat = flatten(x);
    for (Eigen::Index c = 0; c < flat.size(); ++c) out << flat[c] << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace aggnash
