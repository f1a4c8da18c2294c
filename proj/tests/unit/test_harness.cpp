#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "sbm/errors.hpp"
#include "sbm/harness.hpp"
#include "sbm/inference.hpp"
#include "sbm/report.hpp"

using namespace sbm;

namespace {

MonteCarloConfig small_config() {
  return parse_mc_config("n=60\ns0=2\nmu0=-1.5\nbeta=log_n\nreps=6\nseed=42\nmax_size=20\n");
}

std::string summary_text(const MonteCarloConfig& cfg, const MonteCarloSummary& s) {
  std::ostringstream out;
  write_summary_csv(cfg, s, out);
  return out.str();
}

}  // namespace

TEST_CASE("degree distribution") {
  const auto tri = degree_distribution(Graph(3, {{0, 1}, {0, 2}, {1, 2}}));
  REQUIRE(tri.size() == 1);
  CHECK(tri[0] == std::pair<std::int64_t, double>{2, 1.0});
  const auto star = degree_distribution(Graph(4, {{0, 1}, {0, 2}, {0, 3}}));
  REQUIRE(star.size() == 2);
  CHECK(star[0] == std::pair<std::int64_t, double>{1, 0.75});
  CHECK(star[1] == std::pair<std::int64_t, double>{3, 0.25});

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto dist = degree_distribution(sample_sbm(SbmParams::planted(137, -2.5, 4, 2.0), seed));
    double total = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      total += dist[k].second;
      CHECK(dist[k].second > 0.0);
      if (k > 0) CHECK(dist[k].first > dist[k - 1].first);
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("Monte Carlo configuration") {
  const auto cfg = parse_mc_config("# grid cell\nn = 400\ns0 = sqrt_n\nmu0 = -sqrt_log_n\nbeta = 1.5\nreps=3\n");
  CHECK(cfg.s0.resolve(400) == 20);
  CHECK(cfg.mu0.resolve(400) == doctest::Approx(-std::sqrt(std::log(400.0))));
  CHECK(cfg.beta.resolve(400) == 1.5);
  CHECK(cfg.effective_max_size() == 80);
  CHECK(parse_mc_config("n=50\nreps=1").effective_max_size() == 40);
  CHECK(parse_mc_config("n=100\ns0=sqrt_half_n\nreps=1").s0.resolve(100) == 7);
  CHECK(parse_mc_config("n=100\ns0=two_sqrt_n\nmu0=-log_n\nreps=1").mu0.resolve(100) ==
        doctest::Approx(-std::log(100.0)));
  CHECK_THROWS_AS(parse_mc_config("n=10\nfoo=1"), DataError);
  CHECK_THROWS_AS(parse_mc_config("n=10\ns0=10"), DataError);
  CHECK_THROWS_AS(parse_mc_config("n=10\nreps=0"), DataError);
  CHECK_THROWS_AS(parse_mc_config("n=ten"), DataError);
  CHECK_THROWS_AS(parse_mc_config("criterion=aic"), DataError);
}

TEST_CASE("Monte Carlo runs are reproducible") {
  auto cfg = small_config();
  cfg.reps = 1;
  const auto a = run_monte_carlo(cfg, 1), b = run_monte_carlo(cfg, 1);
  CHECK(summary_text(cfg, a.summary) == summary_text(cfg, b.summary));

  const auto base = small_config();
  const auto one = run_monte_carlo(base, 1), four = run_monte_carlo(base, 4);
  CHECK(summary_text(base, one.summary) == summary_text(base, four.summary));
  std::ostringstream r1, r4;
  write_records_csv(one.records, r1);
  write_records_csv(four.records, r4);
  CHECK(r1.str() == r4.str());
  CHECK(one.summary.reps_completed == 6);
  CHECK(one.summary.correct_support_freq >= 0.0);
  CHECK(one.summary.correct_support_freq <= 1.0);
}

TEST_CASE("summaries replay from persisted records") {
  const auto cfg = small_config();
  const auto run = run_monte_carlo(cfg, 2);
  std::stringstream buf;
  write_records_csv(run.records, buf);
  const auto replayed = read_records_csv(buf);
  REQUIRE(replayed.size() == run.records.size());
  const auto again = summarize(replayed, cfg.s0.resolve(cfg.n));
  CHECK(summary_text(cfg, again) == summary_text(cfg, run.summary));

  std::vector<RepRecord> mixed = run.records;
  mixed[0].failed = true;
  const auto s = summarize(mixed, 2);
  CHECK(s.failures == 1);
  CHECK(s.reps_completed == mixed.size() - 1);
}

TEST_CASE("support hash") {
  CHECK(support_hash({0, 1}) == support_hash({0, 1}));
  CHECK(support_hash({0, 1}) != support_hash({1, 0}));
  CHECK(support_hash({}) != support_hash({0}));
}

TEST_CASE("model-fit overlay") {
  SUBCASE("null fit tracks the Poisson reference") {
    const auto g = sample_sbm(SbmParams::planted(500, std::log(10.0 / 489.0), 0, 0.0), 3);
    const auto fit = fit_support(g, {});
    const auto rows = model_fit_overlay(g, fit, 100, 8);
    double tv = 0.0, fitted = 0.0;
    for (const auto& r : rows) {
      tv += std::abs(r.fitted - r.poisson);
      fitted += r.fitted;
    }
    CHECK(tv / 2.0 < 0.05);
    CHECK(fitted == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("fixed seed is deterministic") {
    const auto g = sample_sbm(SbmParams::planted(80, -2.0, 2, 2.0), 4);
    const auto fit = fit_support(g, {0, 1});
    std::ostringstream a, b;
    write_overlay_csv(model_fit_overlay(g, fit, 1, 12), a);
    write_overlay_csv(model_fit_overlay(g, fit, 1, 12), b);
    CHECK(a.str() == b.str());
  }
  SUBCASE("planted hubs sit beyond the Poisson tail") {
    const auto g = sample_sbm(SbmParams::planted(300, -3.5, 3, std::log(300.0)), 6);
    const auto fit = fit_support(g, {0, 1, 2});
    const auto rows = model_fit_overlay(g, fit, 20, 1);
    double cdf = 0.0;
    std::int64_t poisson_q = 0;
    for (const auto& r : rows) {
      cdf += r.poisson;
      if (cdf >= 0.999) {
        poisson_q = r.k;
        break;
      }
    }
    std::int64_t max_fitted = 0;
    for (const auto& r : rows) {
      if (r.fitted > 0) max_fitted = r.k;
    }
    CHECK(max_fitted > poisson_q);
  }
  SUBCASE("preconditions") {
    const auto g = Graph(4, {{0, 1}, {0, 2}, {0, 3}});
    auto fit = fit_support(g, {0});
    fit.converged = false;
    CHECK_THROWS_AS(model_fit_overlay(g, fit, 5, 1), std::invalid_argument);
  }
}

TEST_CASE("fit report") {
  const auto g = sample_sbm(SbmParams::planted(100, -1.5, 2, std::log(100.0)), 10);
  const auto path = solution_path(g, 50);
  const auto& e = select(path, Criterion::bic);
  const auto j = fit_to_json(e, g.n());
  for (const char* key : {"n", "s", "support", "mu_hat", "beta_hat", "nll", "bic", "bic_star", "converged",
                          "at_boundary", "existence_ok"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["n"] == 100);
  CHECK(j["support"].size() == e.s);
  CHECK(j["beta_hat"].size() == e.fit.params.support.size());
  CHECK(j["mu_hat"].get<double>() == e.fit.params.mu);

  const auto pj = path_to_json(path);
  CHECK(pj["entries"].size() == path.entries.size());
  CHECK(pj["selected"]["bic"] == e.s);

  const auto ej = er_to_json(er_mle(Graph(3, {{0, 1}, {0, 2}, {1, 2}})));
  CHECK(ej["mu_hat"].is_null());
  CHECK(ej["boundary"] == true);
}
