#include <cmath>
#include <stdexcept>

#include "sbm/params.hpp"

namespace sbm {

SbmParams SbmParams::make(double mu, std::vector<double> beta) {
  SbmParams p;
  p.mu = mu;
  p.beta = std::move(beta);
  for (NodeId i = 0; i < p.beta.size(); ++i) {
    if (p.beta[i] != 0.0) p.support.push_back(i);
  }
  p.validate();
  return p;
}

SbmParams SbmParams::planted(std::size_t n, double mu, std::size_t s0, double value) {
  if (s0 >= n) throw std::invalid_argument("planted support must leave a zero beta");
  std::vector<double> beta(n, 0.0);
  for (std::size_t i = 0; i < s0; ++i) beta[i] = value;
  return make(mu, std::move(beta));
}

void SbmParams::validate() const {
  if (beta.empty()) throw std::invalid_argument("beta must have at least one entry");
  if (!std::isfinite(mu)) throw std::invalid_argument("mu is not finite");
  std::size_t nonzero = 0;
  std::size_t next = 0;
  for (NodeId i = 0; i < beta.size(); ++i) {
    if (!std::isfinite(beta[i])) throw std::invalid_argument("beta is not finite");
    if (beta[i] < 0.0) throw std::invalid_argument("beta must be nonnegative");
    if (beta[i] != 0.0) {
      ++nonzero;
      if (next >= support.size() || support[next] != i) {
        throw std::invalid_argument("support does not match the nonzero entries of beta");
      }
      ++next;
    }
  }
  if (next != support.size()) {
    throw std::invalid_argument("support does not match the nonzero entries of beta");
  }
  if (nonzero >= beta.size()) throw std::invalid_argument("at least one beta must be zero");
}

void Reparam::validate() const {
  if (!(gamma >= 0.0 && gamma < 2.0)) throw std::invalid_argument("gamma must lie in [0, 2)");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
  if (!(gamma - alpha >= 0.0 && gamma - alpha < 1.0)) {
    throw std::invalid_argument("gamma - alpha must lie in [0, 1)");
  }
  if (beta_dagger.size() != support.size()) {
    throw std::invalid_argument("beta_dagger must align with the support");
  }
}

Reparam to_dagger(const SbmParams& params, double gamma, double alpha) {
  const double log_n = std::log(static_cast<double>(params.n()));
  Reparam rep;
  rep.gamma = gamma;
  rep.alpha = alpha;
  rep.mu_dagger = params.mu + gamma * log_n;
  rep.support = params.support;
  rep.beta_dagger.reserve(params.support.size());
  for (auto i : params.support) rep.beta_dagger.push_back(params.beta[i] - alpha * log_n);
  rep.validate();
  return rep;
}

SbmParams from_dagger(const Reparam& rep, std::size_t n) {
  rep.validate();
  const double log_n = std::log(static_cast<double>(n));
  std::vector<double> beta(n, 0.0);
  for (std::size_t k = 0; k < rep.support.size(); ++k) {
    if (rep.support[k] >= n) throw std::invalid_argument("support index out of range");
    beta[rep.support[k]] = rep.alpha * log_n + rep.beta_dagger[k];
  }
  return SbmParams::make(-rep.gamma * log_n + rep.mu_dagger, std::move(beta));
}

}  // namespace sbm
