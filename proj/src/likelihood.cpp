#include "sbm/likelihood.hpp"

#include <algorithm>
#include <stdexcept>

namespace sbm {
namespace {

void require_finite(const SbmParams& params) {
  if (!std::isfinite(params.mu)) throw std::invalid_argument("mu is not finite");
  for (double b : params.beta) {
    if (!std::isfinite(b)) throw std::invalid_argument("beta is not finite");
  }
}

void require_compatible(const SuffStats& stats, const SbmParams& params) {
  if (params.n() != stats.n) throw std::invalid_argument("params and statistics disagree on n");
  require_finite(params);
  for (auto i : params.support) {
    if (!std::binary_search(stats.support.begin(), stats.support.end(), i)) {
      throw std::invalid_argument("params.support is not contained in the statistics' support");
    }
  }
}

// sum_{i<j} log(1 + e^{mu + beta_i + beta_j}) with beta zero off `block`.
double pair_sum(std::size_t n, double mu, std::span<const double> block) {
  const double r = static_cast<double>(n - block.size());
  double acc = r * (r - 1.0) / 2.0 * log1p_exp(mu);
  for (std::size_t k = 0; k < block.size(); ++k) {
    acc += r * log1p_exp(mu + block[k]);
    for (std::size_t l = k + 1; l < block.size(); ++l) acc += log1p_exp(mu + block[k] + block[l]);
  }
  return acc;
}

}  // namespace

SuffStats SuffStats::from_graph(const Graph& g, Support support) {
  std::sort(support.begin(), support.end());
  if (std::adjacent_find(support.begin(), support.end()) != support.end()) {
    throw std::invalid_argument("support contains duplicate ids");
  }
  if (!support.empty() && support.back() >= g.n()) {
    throw std::invalid_argument("support index out of range");
  }
  if (support.size() >= g.n()) throw std::invalid_argument("support must have at most n - 1 nodes");
  SuffStats s;
  s.n = g.n();
  s.d_plus = static_cast<std::int64_t>(g.d_plus());
  s.d_support.reserve(support.size());
  for (auto i : support) s.d_support.push_back(g.degree(i));
  s.support = std::move(support);
  return s;
}

BlockObjective::BlockObjective(SuffStats stats) : stats_(std::move(stats)) {
  outside_nodes_ = static_cast<double>(stats_.n - stats_.support.size());
  outside_pairs_ = outside_nodes_ * (outside_nodes_ - 1.0) / 2.0;
}

double BlockObjective::value(const Eigen::VectorXd& x) const {
  const double mu = x[0];
  const auto s = stats_.support.size();
  double acc = -static_cast<double>(stats_.d_plus) * mu;
  for (std::size_t k = 0; k < s; ++k) acc -= static_cast<double>(stats_.d_support[k]) * x[1 + k];
  return acc + pair_sum(stats_.n, mu, std::span<const double>(x.data() + 1, s));
}

Eigen::VectorXd BlockObjective::gradient(const Eigen::VectorXd& x) const {
  const double mu = x[0];
  const auto s = stats_.support.size();
  const double r = outside_nodes_;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
  g[0] = -static_cast<double>(stats_.d_plus) + outside_pairs_ * logistic(mu);
  for (std::size_t k = 0; k < s; ++k) {
    const auto ik = static_cast<Eigen::Index>(1 + k);
    const double p = logistic(mu + x[ik]);
    g[0] += r * p;
    g[ik] += -static_cast<double>(stats_.d_support[k]) + r * p;
    for (std::size_t l = k + 1; l < s; ++l) {
      const auto il = static_cast<Eigen::Index>(1 + l);
      const double q = logistic(mu + x[ik] + x[il]);
      g[0] += q;
      g[ik] += q;
      g[il] += q;
    }
  }
  return g;
}

Eigen::MatrixXd BlockObjective::hessian(const Eigen::VectorXd& x) const {
  const double mu = x[0];
  const auto s = stats_.support.size();
  const double r = outside_nodes_;
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  h(0, 0) = outside_pairs_ * logistic_variance(mu);
  for (std::size_t k = 0; k < s; ++k) {
    const auto ik = static_cast<Eigen::Index>(1 + k);
    const double w = r * logistic_variance(mu + x[ik]);
    h(0, 0) += w;
    h(0, ik) += w;
    h(ik, ik) += w;
    for (std::size_t l = k + 1; l < s; ++l) {
      const auto il = static_cast<Eigen::Index>(1 + l);
      const double v = logistic_variance(mu + x[ik] + x[il]);
      h(0, 0) += v;
      h(0, ik) += v;
      h(0, il) += v;
      h(ik, ik) += v;
      h(il, il) += v;
      h(ik, il) = v;
    }
  }
  return h.selfadjointView<Eigen::Upper>();
}

Eigen::VectorXd BlockObjective::pack(const SbmParams& params) const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(dim()));
  x[0] = params.mu;
  for (std::size_t k = 0; k < stats_.support.size(); ++k) {
    x[static_cast<Eigen::Index>(1 + k)] = params.beta[stats_.support[k]];
  }
  return x;
}

SbmParams BlockObjective::unpack(const Eigen::VectorXd& x) const {
  std::vector<double> beta(stats_.n, 0.0);
  for (std::size_t k = 0; k < stats_.support.size(); ++k) {
    beta[stats_.support[k]] = std::max(0.0, x[static_cast<Eigen::Index>(1 + k)]);
  }
  return SbmParams::make(x[0], std::move(beta));
}

double neg_log_lik(const SuffStats& stats, const SbmParams& params) {
  require_compatible(stats, params);
  BlockObjective obj(stats);
  return obj.value(obj.pack(params));
}

std::vector<double> gradient(const SuffStats& stats, const SbmParams& params) {
  require_compatible(stats, params);
  BlockObjective obj(stats);
  const Eigen::VectorXd g = obj.gradient(obj.pack(params));
  return {g.begin(), g.end()};
}

Moments moments(const SbmParams& params) {
  params.validate();
  const std::size_t n = params.n();
  const auto& support = params.support;
  const std::size_t s = support.size();
  const double r = static_cast<double>(n - s);
  const double mu = params.mu;

  Moments m;
  m.expected_degree.assign(n, 0.0);
  m.degree_variance.assign(n, 0.0);

  // Nodes outside the support all share one value.
  double out_mean = (r - 1.0) * logistic(mu);
  double out_var = (r - 1.0) * logistic_variance(mu);
  m.expected_edges = r * (r - 1.0) / 2.0 * logistic(mu);
  m.edge_variance = r * (r - 1.0) / 2.0 * logistic_variance(mu);

  for (std::size_t k = 0; k < s; ++k) {
    const auto i = support[k];
    const double x = mu + params.beta[i];
    const double p = logistic(x), w = logistic_variance(x);
    out_mean += p;
    out_var += w;
    m.expected_degree[i] += r * p;
    m.degree_variance[i] += r * w;
    m.expected_edges += r * p;
    m.edge_variance += r * w;
    for (std::size_t l = k + 1; l < s; ++l) {
      const auto j = support[l];
      const double y = x + params.beta[j];
      const double q = logistic(y), v = logistic_variance(y);
      m.expected_degree[i] += q;
      m.expected_degree[j] += q;
      m.degree_variance[i] += v;
      m.degree_variance[j] += v;
      m.expected_edges += q;
      m.edge_variance += v;
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    if (params.beta[i] == 0.0) {
      m.expected_degree[i] = out_mean;
      m.degree_variance[i] = out_var;
    }
  }
  return m;
}

double expected_neg_log_lik(const SbmParams& eval, const Moments& truth) {
  eval.validate();
  if (truth.expected_degree.size() != eval.n()) {
    throw std::invalid_argument("moments and params disagree on n");
  }
  std::vector<double> block;
  block.reserve(eval.support.size());
  double acc = -truth.expected_edges * eval.mu;
  for (auto i : eval.support) {
    acc -= truth.expected_degree[i] * eval.beta[i];
    block.push_back(eval.beta[i]);
  }
  return acc + pair_sum(eval.n(), eval.mu, block);
}

}  // namespace sbm
