#include <doctest.h>

#include <cmath>
#include <random>

#include "sbm/inference.hpp"

using namespace sbm;

TEST_CASE("Erdos-Renyi fit") {
  const auto er = er_mle(Graph(3, {{0, 1}}));
  CHECK(er.p_hat == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  REQUIRE(er.mu_hat);
  CHECK(*er.mu_hat == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  REQUIRE(er.se_p_plugin);
  CHECK(*er.se_p_plugin == doctest::Approx(0.2721655270).epsilon(1e-10));
  CHECK_FALSE(er.boundary);

  const auto full = er_mle(Graph(3, {{0, 1}, {0, 2}, {1, 2}}));
  CHECK(full.p_hat == 1.0);
  CHECK(full.boundary);
  CHECK_FALSE(full.mu_hat);
  CHECK_FALSE(full.se_p_plugin);

  const auto g = sample_sbm(SbmParams::planted(100, -std::log(100.0), 0, 0), 5);
  const auto sparse = er_mle(g, 1.0);
  REQUIRE(sparse.se_mu_asymptotic);
  CHECK(*sparse.mu_dagger == doctest::Approx(*sparse.mu_hat + std::log(100.0)));
  CHECK(*sparse.se_mu_asymptotic == doctest::Approx(std::sqrt(2 * std::exp(-*sparse.mu_dagger) / 100.0)));
}

TEST_CASE("regimes") {
  CHECK(classify_regime(1.0, 0.5) == SparsityRegime::local_below_global);
  CHECK(classify_regime(0.5, 0.5) == SparsityRegime::matched);
  CHECK(classify_regime(0.0, 0.0) == SparsityRegime::dense);
  CHECK_THROWS_AS(classify_regime(0.5, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(classify_regime(1.5, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(classify_regime(2.0, 1.5), std::invalid_argument);
}

TEST_CASE("known-support covariance") {
  Reparam rep;
  rep.support = {0};
  rep.beta_dagger = {0.0};
  rep.gamma = 1.0;
  rep.alpha = 0.5;
  auto d = known_support_covariance(rep, {0});
  CHECK(d == std::vector<double>{2.0, 1.0});
  CHECK(known_support_se(rep, {0}, 100)[0] == doctest::Approx(0.1414213562).epsilon(1e-10));

  rep.gamma = rep.alpha = 0.0;
  CHECK(known_support_covariance(rep, {0}) == std::vector<double>{8.0, 4.0});
  rep.gamma = rep.alpha = 0.4;
  CHECK(known_support_covariance(rep, {0}) == std::vector<double>{2.0, 4.0});

  // Continuity within a regime.
  rep.gamma = 1.0;
  rep.alpha = 0.5;
  rep.mu_dagger = 0.3;
  rep.beta_dagger = {0.7};
  const auto base = known_support_se(rep, {0}, 400);
  rep.mu_dagger += 1e-7;
  rep.beta_dagger[0] += 1e-7;
  const auto moved = known_support_se(rep, {0}, 400);
  for (std::size_t k = 0; k < base.size(); ++k) CHECK(std::abs(moved[k] - base[k]) < 1e-6);

  CHECK_THROWS_AS(known_support_covariance(rep, {3}), std::invalid_argument);
}

TEST_CASE("beta-min threshold") {
  const double thr = beta_min_threshold(102, 0.05, 0.0, 0.0, false);
  CHECK(thr == doctest::Approx(0.7354790167).epsilon(1e-10));
  CHECK(std::log1p(0.2716203031 * 4) == doctest::Approx(thr).epsilon(1e-9));
  CHECK(beta_min_threshold(1'000'000, 0.05, 0.0, 0.0, false) < 0.011);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 50; ++t) {
    const double mu = u(rng), b = std::abs(u(rng));
    const std::size_t n = 3 + rng() % 1000;
    CHECK(beta_min_threshold(n, 0.1, mu, b, true) > beta_min_threshold(n, 0.1, mu, b, false));
  }
  CHECK_THROWS_AS(beta_min_threshold(2, 0.1, 0, 0, false), std::invalid_argument);
  CHECK_THROWS_AS(beta_min_threshold(10, 1.0, 0, 0, false), std::invalid_argument);
}

TEST_CASE("excess-risk bound") {
  const auto r = excess_risk_bound(SbmParams::planted(10, 0.0, 0, 0.0), 1, 1.0, 1.0, 0.5);
  CHECK(r.d_plus_expected == doctest::Approx(22.5));
  CHECK(r.var_dplus == doctest::Approx(11.25));
  CHECK(r.max_var_di == doctest::Approx(2.25));
  CHECK(r.bound == doctest::Approx(1.1941847467).epsilon(1e-10));

  const auto params = SbmParams::planted(50, -1.0, 3, 2.0);
  double prev = INFINITY;
  for (double tau : {0.05, 0.1, 0.3, 0.6, 0.9, 0.999}) {
    const double b = excess_risk_bound(params, 3, 30, 30, tau).bound;
    CHECK(b < prev);
    prev = b;
  }
  // The local term is linear in m2 * s.
  const auto zero = excess_risk_bound(params, 0, 30, 30, 0.1).bound;
  const auto one = excess_risk_bound(params, 1, 30, 30, 0.1).bound;
  const auto six = excess_risk_bound(params, 3, 30, 60, 0.1).bound;
  CHECK(six - zero == doctest::Approx(6 * (one - zero)).epsilon(1e-12));
}
