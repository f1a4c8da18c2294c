#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sbm/path.hpp"

using namespace sbm;

namespace {

void check_ordering(const Graph& g, const PathEntry& e) {
  const auto& b = e.fit.params.beta;
  for (NodeId i = 0; i < g.n(); ++i) {
    for (NodeId j = 0; j < g.n(); ++j) {
      if (g.degree(i) < g.degree(j)) CHECK(b[i] <= b[j] + 1e-9);
      if (g.degree(i) == g.degree(j) && std::binary_search(e.support.begin(), e.support.end(), i) &&
          std::binary_search(e.support.begin(), e.support.end(), j)) {
        CHECK(std::abs(b[i] - b[j]) <= 1e-9);
      }
    }
  }
}

}  // namespace

TEST_CASE("path on small graphs") {
  SUBCASE("star") {
    const Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto path = solution_path(star, 3);
    REQUIRE(path.entries.size() == 2);
    CHECK(path.entries[0].s == 0);
    CHECK(path.entries[1].s == 1);
    CHECK(path.entries[1].support == Support{0});
    CHECK(select(path, Criterion::bic).s == 1);

    const auto brute = brute_force_l0(star, 1);
    CHECK(brute.fit.support == Support{0});
    CHECK(brute.fit.nll == doctest::Approx(path.entries[1].fit.nll).epsilon(1e-10));
    CHECK_FALSE(brute.tie);
  }
  SUBCASE("tied top degrees enter together") {
    const auto path = solution_path(Graph(4, {{0, 1}, {0, 2}, {1, 3}}), 3);
    REQUIRE(path.entries.size() == 2);
    CHECK(path.entries[1].support == Support{0, 1});
    CHECK(path.entries[1].fit.params.beta[0] == doctest::Approx(path.entries[1].fit.params.beta[1]).epsilon(1e-9));
  }
  SUBCASE("regular graph") {
    const Graph tri(3, {{0, 1}, {0, 2}, {1, 2}});
    const auto path = solution_path(tri, 2);
    CHECK(path.entries.size() == 1);
    CHECK_FALSE(path.warnings.empty());
    CHECK(select(path, Criterion::bic).s == 0);
    const auto brute = brute_force_l0(tri, 1);
    CHECK(brute.tie);
    CHECK(brute.fit.support == Support{0});
  }
  SUBCASE("brute force preconditions") {
    CHECK_THROWS_AS(brute_force_l0(Graph(13, {{0, 1}}), 1), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_l0(Graph(4, {{0, 1}}), 4), std::invalid_argument);
  }
}

TEST_CASE("information criteria") {
  FitResult fit;
  fit.nll = 100.0;
  fit.support = {0, 1};
  CHECK(information_criterion(fit, 50, 40, Criterion::bic) == doctest::Approx(214.2213922460).epsilon(1e-12));
  CHECK(information_criterion(fit, 50, 40, Criterion::bic_star) == doctest::Approx(207.3777589082).epsilon(1e-12));
  fit.support.clear();
  CHECK(information_criterion(fit, 50, 40, Criterion::bic) == 200.0);
  CHECK(information_criterion(fit, 50, 40, Criterion::bic_star) == 200.0);
  CHECK(parse_criterion("bic_star") == Criterion::bic_star);
  CHECK_THROWS_AS(parse_criterion("aic"), std::invalid_argument);
}

TEST_CASE("selection semantics") {
  SolutionPath path;
  path.n = 10;
  path.d_plus = 5;
  for (std::size_t s : {0u, 2u, 5u}) {
    PathEntry e;
    e.s = s;
    path.entries.push_back(e);
  }
  path.entries[0].bic = 10;
  path.entries[1].bic = 20;
  path.entries[2].bic = 20;
  CHECK(select(path, Criterion::bic).s == 2);
  CHECK(select(path, Criterion::bic, true).s == 0);
  path.entries.resize(1);
  CHECK(select(path, Criterion::bic).s == 0);
}

TEST_CASE("path matches exhaustive search on random graphs") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + rng() % 5;
    const auto g = oracle::random_graph(n, 0.2 + 0.6 * double(rng() % 100) / 100.0, rng);
    const auto path = solution_path(g, n - 1);
    for (std::size_t k = 0; k < path.entries.size(); ++k) {
      const auto& e = path.entries[k];
      CHECK(e.fit.nll == doctest::Approx(brute_force_l0(g, e.s).fit.nll).epsilon(1e-8));
      check_ordering(g, e);
      if (k > 0) {
        CHECK(e.s > path.entries[k - 1].s);
        CHECK(std::includes(e.support.begin(), e.support.end(), path.entries[k - 1].support.begin(),
                            path.entries[k - 1].support.end()));
        CHECK(e.fit.nll <= path.entries[k - 1].fit.nll + 1e-9);
      }
    }
  }
}

TEST_CASE("selected support matches the exhaustive information-criterion optimum") {
  std::mt19937_64 rng(5150);
  const std::size_t n = 8;
  int agree = 0;
  for (int t = 0; t < 100; ++t) {
    const auto g = sample_sbm(SbmParams::planted(n, -1.5, 2, std::log(double(n))), rng());
    const auto path = solution_path(g, n - 1);
    const auto& chosen = select(path, Criterion::bic);
    double best = INFINITY;
    Support best_support;
    for (std::size_t s = 1; s < n; ++s) {
      const auto b = brute_force_l0(g, s);
      const double bic = information_criterion(b.fit, n, static_cast<std::int64_t>(g.d_plus()), Criterion::bic);
      if (bic < best - 1e-9) {
        best = bic;
        best_support = b.fit.support;
      }
    }
    agree += chosen.support == best_support;
  }
  CHECK(agree >= 99);
}
