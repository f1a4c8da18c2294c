#include "sbm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbm/likelihood.hpp"

namespace sbm {

ErFit er_mle(const Graph& g, std::optional<double> gamma) {
  if (g.n() < 2) throw std::invalid_argument("er_mle needs at least two nodes");
  ErFit fit;
  fit.n = g.n();
  fit.d_plus = static_cast<std::int64_t>(g.d_plus());
  const double n = static_cast<double>(g.n());
  const double pairs = n * (n - 1.0) / 2.0;
  fit.p_hat = static_cast<double>(fit.d_plus) / pairs;
  fit.boundary = fit.d_plus == 0 || static_cast<double>(fit.d_plus) == pairs;
  fit.gamma = gamma;
  if (gamma && !(*gamma >= 0.0 && *gamma < 2.0)) {
    throw std::invalid_argument("gamma must lie in [0, 2)");
  }
  if (fit.boundary) return fit;

  const double p = fit.p_hat;
  fit.mu_hat = std::log(p / (1.0 - p));
  fit.se_p_plugin = std::sqrt(p * (1.0 - p) / pairs);
  fit.se_mu_plugin = 1.0 / std::sqrt(pairs * p * (1.0 - p));

  if (gamma) {
    const double scale = std::pow(n, -(2.0 - *gamma));
    fit.p_dagger = std::pow(n, *gamma) * p;
    fit.mu_dagger = *fit.mu_hat + *gamma * std::log(n);
    double var_p, var_mu;
    if (*gamma == 0.0) {
      var_p = 2.0 * *fit.p_dagger * (1.0 - *fit.p_dagger);
      var_mu = 4.0 + 2.0 * std::exp(-*fit.mu_dagger) + 2.0 * std::exp(*fit.mu_dagger);
    } else {
      var_p = 2.0 * *fit.p_dagger;
      var_mu = 2.0 * std::exp(-*fit.mu_dagger);
    }
    fit.se_p_asymptotic = std::sqrt(var_p * scale);
    fit.se_mu_asymptotic = std::sqrt(var_mu * scale);
  }
  return fit;
}

SparsityRegime classify_regime(double gamma, double alpha) {
  if (!(gamma >= 0.0 && gamma < 2.0 && alpha >= 0.0 && alpha < 1.0 && gamma - alpha >= 0.0 &&
        gamma - alpha < 1.0)) {
    throw std::invalid_argument("(gamma, alpha) outside the admissible region");
  }
  if (alpha < gamma) return SparsityRegime::local_below_global;
  if (gamma > 0.0) return SparsityRegime::matched;
  return SparsityRegime::dense;
}

std::vector<double> known_support_covariance(const Reparam& rep,
                                             const std::vector<std::size_t>& subset) {
  rep.validate();
  const auto regime = classify_regime(rep.gamma, rep.alpha);
  const double mu = rep.mu_dagger;
  std::vector<double> diag;
  diag.reserve(1 + subset.size());
  diag.push_back(regime == SparsityRegime::dense ? 4.0 + 2.0 * std::exp(-mu) + 2.0 * std::exp(mu)
                                                 : 2.0 * std::exp(-mu));
  for (auto k : subset) {
    if (k >= rep.beta_dagger.size()) throw std::invalid_argument("subset position out of range");
    const double eta = mu + rep.beta_dagger[k];
    diag.push_back(regime == SparsityRegime::local_below_global
                       ? std::exp(-eta)
                       : 2.0 + std::exp(-eta) + std::exp(eta));
  }
  return diag;
}

std::vector<double> known_support_se(const Reparam& rep, const std::vector<std::size_t>& subset,
                                     std::size_t n) {
  auto diag = known_support_covariance(rep, subset);
  const double nn = static_cast<double>(n);
  const double mu_rate = std::pow(nn, -(1.0 - rep.gamma / 2.0));
  const double beta_rate = std::pow(nn, -(0.5 - (rep.gamma - rep.alpha) / 2.0));
  for (std::size_t k = 0; k < diag.size(); ++k) {
    diag[k] = std::sqrt(diag[k]) * (k == 0 ? mu_rate : beta_rate);
  }
  return diag;
}

double beta_min_threshold(std::size_t n, double tau, double mu, double beta_bar, bool union_bound) {
  if (n < 3) throw std::invalid_argument("beta_min_threshold needs n >= 3");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  const double level = union_bound ? tau / (nn * (nn - 1.0)) : tau;
  const double c = std::sqrt(2.0 / (nn - 2.0) * std::log(2.0 / level));
  const double mu_plus = std::max(mu, 0.0);
  const double mu_minus = std::max(-mu, 0.0);
  return std::log1p(c * (1.0 + std::exp(mu_minus)) * (1.0 + std::exp(2.0 * beta_bar + mu_plus)));
}

double RiskBound::evaluate() const {
  const double global = std::log(4.0 / tau);
  const double local = std::log(4.0 * static_cast<double>(n) / tau);
  return 2.0 / d_plus_expected *
         (m1 * (std::sqrt(2.0 * var_dplus * global) + global / 3.0) +
          m2 * static_cast<double>(s) * (std::sqrt(2.0 * max_var_di * local) + local / 3.0));
}

RiskBound excess_risk_bound(const SbmParams& params, std::size_t s, double m1, double m2, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  const auto m = moments(params);
  if (!(m.expected_edges > 0.0)) throw std::invalid_argument("expected edge count is zero");
  RiskBound r;
  r.d_plus_expected = m.expected_edges;
  r.var_dplus = m.edge_variance;
  r.max_var_di = *std::max_element(m.degree_variance.begin(), m.degree_variance.end());
  r.tau = tau;
  r.m1 = m1;
  r.m2 = m2;
  r.s = s;
  r.n = params.n();
  r.bound = r.evaluate();
  return r;
}

}  // namespace sbm
