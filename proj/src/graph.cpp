#include "aggnash/graph.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aggnash {

namespace {

// Union-find over node indices.
class Components {
 public:
  explicit Components(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void join(int i, int j) { parent_[find(i)] = find(j); }
  bool single() {
    for (int i = 1; i < static_cast<int>(parent_.size()); ++i) {
      if (find(i) != find(0)) return false;
    }
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

Topology::Topology(int num_nodes, std::vector<Edge> edges) : n_(num_nodes), adj_(num_nodes) {
  if (num_nodes < 1) throw Error("topology needs at least one node");
  for (auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw Error("edge endpoint out of range");
    if (i == j) throw Error("self-loops are implicit and may not be listed");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  for (const auto& [i, j] : edges_) {
    adj_[i].push_back(j);
    adj_[j].push_back(i);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

int Topology::max_degree() const {
  int m = 0;
  for (const auto& a : adj_) m = std::max(m, static_cast<int>(a.size()));
  return m;
}

bool Topology::has_edge(int i, int j) const {
  const auto& a = adj_.at(i);
  return std::binary_search(a.begin(), a.end(), j);
}

bool Topology::connected() const {
  Components c(n_);
  for (const auto& [i, j] : edges_) c.join(i, j);
  return c.single();
}

TopologyKind parse_topology_kind(const std::string& name) {
  if (name == "cycle") return TopologyKind::cycle;
  if (name == "wheel") return TopologyKind::wheel;
  if (name == "grid") return TopologyKind::grid;
  if (name == "complete") return TopologyKind::complete;
  if (name == "random_connected" || name == "random_tree") return TopologyKind::random_connected;
  throw Error("unknown topology kind '" + name + "'");
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::cycle: return "cycle";
    case TopologyKind::wheel: return "wheel";
    case TopologyKind::grid: return "grid";
    case TopologyKind::complete: return "complete";
    case TopologyKind::random_connected: return "random_connected";
  }
  return "?";
}

Topology build_topology(TopologyKind kind, int n, Rng* rng) {
  if (n < 2) throw Error("topologies need at least two nodes");
  std::vector<Topology::Edge> e;
  switch (kind) {
    case TopologyKind::cycle:
      for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
      break;
    case TopologyKind::wheel:
      for (int j = 1; j < n; ++j) e.emplace_back(0, j);
      break;
    case TopologyKind::grid: {
      constexpr int kRow = 5;
      if (n % kRow != 0) throw Error("grid topology needs a node count divisible by 5");
      for (int i = 0; i < n; ++i) {
        if ((i % kRow) + 1 < kRow) e.emplace_back(i, i + 1);
        if (i + kRow < n) e.emplace_back(i, i + kRow);
      }
      break;
    }
    case TopologyKind::complete:
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
      }
      break;
    case TopologyKind::random_connected: {
      if (!rng) throw Error("random_connected topology needs an RNG");
      for (int j = 1; j < n; ++j) {
        std::uniform_int_distribution<int> pick(0, j - 1);
        e.emplace_back(pick(*rng), j);
      }
      break;
    }
  }
  return Topology(n, std::move(e));
}

WeightRule parse_weight_rule(const std::string& name) {
  if (name == "metropolis_half") return WeightRule::metropolis_half;
  if (name == "full_averaging") return WeightRule::full_averaging;
  throw Error("unknown weight rule '" + name + "'");
}

std::string to_string(WeightRule rule) {
  return rule == WeightRule::metropolis_half ? "metropolis_half" : "full_averaging";
}

WeightMatrix build_weights(const Topology& t, WeightRule rule) {
  const int n = t.num_nodes();
  WeightMatrix wm;
  if (rule == WeightRule::full_averaging) {
    if (static_cast<int>(t.edges().size()) != n * (n - 1) / 2) {
      throw Error("full_averaging weights require the complete graph");
    }
    wm.w = Matrix::Constant(n, n, 1.0 / n);
    wm.delta = 1.0 / n;
    return wm;
  }
  const int dmax = t.max_degree();
  wm.delta = dmax > 0 ? 0.5 / dmax : 1.0;
  wm.w = Matrix::Zero(n, n);
  for (const auto& [i, j] : t.edges()) {
    wm.w(i, j) = wm.delta;
    wm.w(j, i) = wm.delta;
  }
  for (int i = 0; i < n; ++i) wm.w(i, i) = 1.0 - wm.delta * t.degree(i);
  return wm;
}

std::string check_weights(const WeightMatrix& wm, const Topology& t, double tol) {
  const int n = t.num_nodes();
  const Matrix& w = wm.w;
  if (w.rows() != n || w.cols() != n) return "weight matrix has the wrong shape";
  if (!(wm.delta > 0.0)) return "weight floor must be positive";
  for (int i = 0; i < n; ++i) {
    if (std::abs(w.row(i).sum() - 1.0) > tol) return "row " + std::to_string(i) + " does not sum to 1";
    if (std::abs(w.col(i).sum() - 1.0) > tol) return "column " + std::to_string(i) + " does not sum to 1";
    for (int j = 0; j < n; ++j) {
      const bool linked = i == j || t.has_edge(i, j);
      if (linked && w(i, j) < wm.delta) {
        return "entry (" + std::to_string(i) + "," + std::to_string(j) + ") below the floor";
      }
      if (!linked && w(i, j) != 0.0) {
        return "entry (" + std::to_string(i) + "," + std::to_string(j) + ") off the graph is nonzero";
      }
    }
  }
  return {};
}

bool check_q_connectivity(const std::vector<Topology>& seq, int q) {
  if (q < 1) throw Error("Q must be at least 1");
  if (seq.empty()) return false;
  const int n = seq.front().num_nodes();
  const int len = static_cast<int>(seq.size());
  const int windows = std::max(1, len - q + 1);
  for (int start = 0; start < windows; ++start) {
    Components c(n);
    for (int k = start; k < std::min(len, start + q); ++k) {
      if (seq[k].num_nodes() != n) throw Error("graph sequence mixes node counts");
      for (const auto& [i, j] : seq[k].edges()) c.join(i, j);
    }
    if (!c.single()) return false;
  }
  return true;
}

Matrix transition_product(const std::vector<WeightMatrix>& seq, int end, int begin) {
  if (begin < 0 || end < begin || end >= static_cast<int>(seq.size())) {
    throw Error("transition_product: invalid index range");
  }
  Matrix phi = seq[begin].w;
  for (int k = begin + 1; k <= end; ++k) phi = seq[k].w * phi;
  return phi;
}

TransitionBoundParams transition_bound_params(int n, int q, double delta) {
  const double base = 1.0 - delta / (4.0 * n * n);
  return {std::pow(base, -2.0), std::pow(base, 1.0 / q)};
}

TransitionBoundReport transition_bound_check(const std::vector<Topology>& topologies,
                                             const std::vector<WeightMatrix>& weights, int q,
                                             double delta) {
  if (topologies.size() != weights.size() || topologies.empty()) {
    throw Error("transition_bound_check: sequence lengths differ or are empty");
  }
  if (!check_q_connectivity(topologies, q)) {
    throw AssumptionError("graph sequence is not Q-connected for Q=" + std::to_string(q));
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    WeightMatrix floor_checked{weights[k].w, delta};
    if (auto msg = check_weights(floor_checked, topologies[k], 1e-12); !msg.empty()) {
      throw AssumptionError("weight matrix " + std::to_string(k) + ": " + msg);
    }
  }
  const int n = topologies.front().num_nodes();
  const auto [theta, beta] = transition_bound_params(n, q, delta);
  const int len = static_cast<int>(weights.size());
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < len; ++s) {
    Matrix phi = weights[s].w;
    for (int k = s; k < len; ++k) {
      if (k > s) phi = weights[k].w * phi;
      const double dev = (phi.array() - 1.0 / n).abs().maxCoeff();
      worst = std::max(worst, dev - theta * std::pow(beta, k - s));
    }
  }
  return {worst, theta, beta};
}

Matrix uniform_contact_probs(const Topology& t) {
  const int n = t.num_nodes();
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j : t.neighbors(i)) p(i, j) = 1.0 / t.degree(i);
  }
  return p;
}

void validate_contact_probs(const Topology& t, const Matrix& p) {
  const int n = t.num_nodes();
  if (p.rows() != n || p.cols() != n) throw Error("contact probabilities have the wrong shape");
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (p(i, j) < 0.0) throw Error("negative contact probability");
      if (p(i, j) > 0.0 && !t.has_edge(i, j)) {
        throw Error("contact probability on a non-edge (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
      }
      s += p(i, j);
    }
    if (std::abs(s - 1.0) > 1e-12) {
      throw Error("contact probabilities of node " + std::to_string(i) + " do not sum to 1");
    }
  }
}

Matrix gossip_event_matrix(int n, int i, int j) {
  Vector e = Vector::Zero(n);
  e[i] = 1.0;
  e[j] = -1.0;
  return Matrix::Identity(n, n) - 0.5 * e * e.transpose();
}

MixingReport gossip_expected_mixing(const Topology& t, const Matrix& p) {
  validate_contact_probs(t, p);
  const int n = t.num_nodes();
  const Matrix avg = Matrix::Constant(n, n, 1.0 / n);
  Matrix ew = Matrix::Zero(n, n);
  Matrix edd = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j : t.neighbors(i)) {
      const double prob = p(i, j) / n;
      if (prob == 0.0) continue;
      const Matrix w = gossip_event_matrix(n, i, j);
      const Matrix d = w - avg;
      ew += prob * w;
      edd += prob * d.transpose() * d;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es_d(0.5 * (edd + edd.transpose()));
  Eigen::SelfAdjointEigenSolver<Matrix> es_w(0.5 * (ew + ew.transpose()));
  MixingReport r;
  r.expected_w = ew;
  r.lambda = std::max(0.0, es_d.eigenvalues()(n - 1));
  r.second_eigenvalue_expected_w = n >= 2 ? es_w.eigenvalues()(n - 2) : 0.0;
  return r;
}

Vector update_probabilities(const Topology& t, const Matrix& p) {
  validate_contact_probs(t, p);
  const int n = t.num_nodes();
  Vector pi(n);
  for (int i = 0; i < n; ++i) {
    double s = 1.0;
    for (int j : t.neighbors(i)) s += p(j, i);
    pi[i] = s / n;
  }
  return pi;
}

}  // namespace aggnash
