#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sbm/graph.hpp"
#include "sbm/params.hpp"

namespace sbm {

inline double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// log(1 + e^x) without overflow.
inline double log1p_exp(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// p (1 - p) for p = logistic(x).
inline double logistic_variance(double x) {
  const double p = logistic(x);
  return p * logistic(-x);
}

/// Sufficient statistics of a graph relative to a block of free beta
/// coordinates: n, d_plus and the degrees of the block's nodes.
struct SuffStats {
  std::size_t n = 0;
  std::int64_t d_plus = 0;
  Support support;
  std::vector<std::int64_t> d_support;  // aligned with `support`

  static SuffStats from_graph(const Graph& g, Support support);
};

/// Negative log-likelihood on the coordinates x = (mu, beta_support) with beta
/// fixed at zero elsewhere. Node pairs are grouped into three blocks (both
/// endpoints outside the support, one inside, both inside), so every
/// evaluation costs O(s^2) regardless of n.
class BlockObjective {
 public:
  explicit BlockObjective(SuffStats stats);

  const SuffStats& stats() const { return stats_; }
  std::size_t dim() const { return 1 + stats_.support.size(); }

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  Eigen::VectorXd pack(const SbmParams& params) const;
  SbmParams unpack(const Eigen::VectorXd& x) const;

 private:
  SuffStats stats_;
  double outside_pairs_;  // C(n - s, 2)
  double outside_nodes_;  // n - s
};

/// ell_n(mu, beta) = -d_plus mu - sum_i d_i beta_i + sum_{i<j} log(1 + e^{mu + beta_i + beta_j}).
/// params.support must be contained in stats.support.
double neg_log_lik(const SuffStats& stats, const SbmParams& params);

/// (d ell / d mu, d ell / d beta_i for i in stats.support).
std::vector<double> gradient(const SuffStats& stats, const SbmParams& params);

struct Moments {
  std::vector<double> expected_degree;
  std::vector<double> degree_variance;
  double expected_edges = 0.0;  // D_plus
  double edge_variance = 0.0;
};

/// Exact population moments of the degrees and edge count.
Moments moments(const SbmParams& params);

/// E[ell_n(eval)] when the graph is drawn with the given population moments.
double expected_neg_log_lik(const SbmParams& eval, const Moments& truth);

}  // namespace sbm
