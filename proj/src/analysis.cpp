#include "aggnash/analysis.hpp"

#include "aggnash/graph.hpp"

#include <cmath>

namespace aggnash {

std::vector<double> lemma4_bounds(int q, double delta, int num_players, double m, double c,
                                  std::span<const double> alphas) {
  if (q < 1 || !(delta > 0.0) || num_players < 1) throw Error("lemma4_bound: invalid constants");
  const auto [theta, beta] = transition_bound_params(num_players, q, delta);
  std::vector<double> out;
  out.reserve(alphas.size() + 1);
  // acc_k = Σ_{s=1..k} β^{k−s} α_{s−1} = β·acc_{k−1} + α_{k−1}
  double acc = 0.0;
  double beta_k = 1.0;
  out.push_back(theta * m);
  for (std::size_t k = 1; k <= alphas.size(); ++k) {
    acc = beta * acc + alphas[k - 1];
    beta_k *= beta;
    out.push_back(theta * beta_k * m + theta * num_players * c * acc);
  }
  return out;
}

double lemma4_bound(long k, int q, double delta, int num_players, double m, double c,
                    std::span<const double> alphas) {
  if (k < 0 || static_cast<std::size_t>(k) > alphas.size()) {
    throw Error("lemma4_bound: need α_0 … α_{k−1}");
  }
  return lemma4_bounds(q, delta, num_players, m, c, alphas.first(k)).back();
}

Prop4Result prop4_bound(const Prop4Constants& c) {
  if (!(c.lambda >= 0.0 && c.lambda < 1.0)) {
    throw AssumptionError("mixing constant λ must lie in [0, 1)");
  }
  if (!(c.mu > 0.0) || c.p_min <= 0.0 || c.p_max < c.p_min || c.alpha_min <= 0.0 ||
      c.alpha_max < c.alpha_min || c.N < 1 || c.n < 1) {
    throw AssumptionError("prop4_bound: constants out of range");
  }
  Prop4Result r;
  const double spread = c.p_max * c.max_L * (c.alpha_max - c.alpha_min);
  r.q = 1.0 - 2.0 * c.mu * c.p_min * c.alpha_min + 2.0 * spread;
  if (!(r.q > 0.0)) {
    throw AssumptionError("stepsize condition violated: 1 − 2μ p_min α_min + 2 p_max maxL (α_max − α_min) > 0 fails (q = " +
                          std::to_string(r.q) + ")");
  }
  if (!(r.q < 1.0)) {
    throw AssumptionError("stepsize condition violated: 1 − 2μ p_min α_min + 2 p_max maxL (α_max − α_min) < 1 fails (q = " +
                          std::to_string(r.q) + ")");
  }
  const double network = 2.0 * c.C * c.C * c.N +
                         c.B * c.C * std::sqrt(2.0 * c.n * c.N) / (1.0 - std::sqrt(c.lambda));
  r.bound = c.p_max * c.alpha_max * c.alpha_max * network /
            (c.mu * c.p_min * c.alpha_min - spread);
  if (c.alpha_min == c.alpha_max) {
    r.equal_steps_bound = c.p_max * c.alpha_max * network / (c.mu * c.p_min);
  }
  if (c.p_min == c.p_max) {
    r.equal_probs_bound = c.alpha_max * c.alpha_max * network /
                          (c.mu * c.alpha_min - c.max_L * (c.alpha_max - c.alpha_min));
  }
  return r;
}

}  // namespace aggnash
