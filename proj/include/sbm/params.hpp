#pragma once

#include <cstddef>
#include <vector>

#include "sbm/types.hpp"

namespace sbm {

/// Parameters (mu, beta) of the sparse beta-model.
///
/// Edge (i, j) is present with probability logistic(mu + beta[i] + beta[j]).
/// Every beta entry is nonnegative and at least one is zero, so |support| <= n - 1.
/// `support` always lists exactly the indices with nonzero beta.
struct SbmParams {
  double mu = 0.0;
  std::vector<double> beta;
  Support support;

  std::size_t n() const { return beta.size(); }

  /// Builds params from a dense beta vector; throws std::invalid_argument
  /// when an invariant is violated.
  static SbmParams make(double mu, std::vector<double> beta);

  /// beta = value on nodes 0..s0-1 and zero elsewhere.
  static SbmParams planted(std::size_t n, double mu, std::size_t s0, double value);

  void validate() const;
};

/// log(n)-shifted view of SbmParams:
///   mu = -gamma log n + mu_dagger,  beta_i = alpha log n + beta_dagger_i (i in support).
struct Reparam {
  double gamma = 0.0;
  double alpha = 0.0;
  double mu_dagger = 0.0;
  std::vector<double> beta_dagger;  // aligned with `support`
  Support support;

  void validate() const;
};

Reparam to_dagger(const SbmParams& params, double gamma, double alpha);

/// Inverse of to_dagger. Entries of beta_dagger may make beta_i zero, in which
/// case the node drops out of the returned support.
SbmParams from_dagger(const Reparam& rep, std::size_t n);

}  // namespace sbm
