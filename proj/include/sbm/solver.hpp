#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbm/graph.hpp"
#include "sbm/likelihood.hpp"
#include "sbm/params.hpp"

namespace sbm {

/// Box |mu| <= m1, 0 <= beta_i <= m2 and Newton stopping rules.
struct FitConfig {
  double m1 = 30.0;
  double m2 = 30.0;
  double tol = 1e-8;
  int max_iter = 200;
  std::optional<SbmParams> warm_start;

  void validate() const;
};

struct FitResult {
  SbmParams params;
  Support support;  // the constraint set; params.support may be smaller
  double nll = 0.0;
  bool converged = false;
  int iterations = 0;
  double kkt_residual = 0.0;  // infinity norm of the projected gradient
  /// Index 0 is mu, index 1 + k is beta of support[k].
  std::vector<bool> at_boundary;
  bool existence_ok = false;

  bool any_at_boundary() const;
};

struct ExistenceReport {
  bool ok = true;
  std::vector<std::string> reasons;
};

/// Necessary condition for an interior MLE: 0 < d_plus < C(n, 2) and
/// 0 < d_i < n - 1 on the support. Not sufficient in general.
ExistenceReport existence_check(const Graph& g, const Support& support);
ExistenceReport existence_check(const SuffStats& stats);

/// Minimizes ell_n over the box with beta fixed at zero off `support`, by
/// projected Newton with an epsilon-active set and Armijo backtracking.
FitResult fit_support(const Graph& g, const Support& support, const FitConfig& cfg = {});
FitResult fit_support(const SuffStats& stats, const FitConfig& cfg = {});

}  // namespace sbm
