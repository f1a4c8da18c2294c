#pragma once

#include <optional>
#include <vector>

#include "sbm/graph.hpp"
#include "sbm/params.hpp"

namespace sbm {

/// Erdos-Renyi fit. Standard errors are absent when p_hat is 0 or 1.
struct ErFit {
  std::size_t n = 0;
  std::int64_t d_plus = 0;
  double p_hat = 0.0;
  std::optional<double> mu_hat;
  std::optional<double> se_p_plugin;
  std::optional<double> se_mu_plugin;
  bool boundary = false;

  // Sparse-regime asymptotics, filled when gamma is supplied.
  std::optional<double> gamma;
  std::optional<double> p_dagger;   // n^gamma p_hat
  std::optional<double> mu_dagger;  // mu_hat + gamma log n
  /// Standard error of p_dagger: sqrt(sigma^2_p n^-(2 - gamma)).
  std::optional<double> se_p_asymptotic;
  /// Standard error of mu_hat (equivalently mu_dagger): sqrt(sigma^2_mu n^-(2 - gamma)).
  std::optional<double> se_mu_asymptotic;
};

ErFit er_mle(const Graph& g, std::optional<double> gamma = std::nullopt);

enum class SparsityRegime {
  local_below_global,  // alpha < gamma
  matched,             // gamma = alpha in (0, 1)
  dense,               // gamma = alpha = 0
};

/// Throws std::invalid_argument outside the admissible (gamma, alpha) region.
SparsityRegime classify_regime(double gamma, double alpha);

/// Diagonal of the limiting covariance for (mu_dagger, beta_dagger_i, i in F)
/// with known support. `subset` lists positions into rep.support.
std::vector<double> known_support_covariance(const Reparam& rep, const std::vector<std::size_t>& subset);

/// Asymptotic standard errors (mu_dagger first, then beta_dagger_i for i in
/// `subset`) at the supplied parameter values. These are large-n
/// approximations; no check is made that the support is small enough for
/// them to apply.
std::vector<double> known_support_se(const Reparam& rep, const std::vector<std::size_t>& subset,
                                     std::size_t n);

/// Smallest nonzero beta that separates support degrees from the rest with
/// probability >= 1 - tau. With `union_bound` the guarantee covers all pairs
/// simultaneously (tau is divided by n(n-1)).
double beta_min_threshold(std::size_t n, double tau, double mu, double beta_bar, bool union_bound);

struct RiskBound {
  std::size_t n = 0;
  double d_plus_expected = 0.0;
  double var_dplus = 0.0;
  double max_var_di = 0.0;
  double bound = 0.0;
  double tau = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  std::size_t s = 0;

  /// Recomputes the bound from the stored components.
  double evaluate() const;
};

/// High-probability upper bound on the excess risk of the level-s estimator
/// over the box [-m1, m1] x [0, m2]^n.
RiskBound excess_risk_bound(const SbmParams& params, std::size_t s, double m1, double m2, double tau);

}  // namespace sbm
