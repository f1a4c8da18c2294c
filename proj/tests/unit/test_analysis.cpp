#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "sbm/analysis.hpp"
#include "sbm/errors.hpp"

using namespace sbm;

namespace {

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d(x.rows(), x.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(x.cols()) = x;
  return d;
}

GroupNetwork group(std::string id, Graph g) { return GroupNetwork{std::move(id), std::move(g), {}}; }

}  // namespace

TEST_CASE("logistic regression") {
  SUBCASE("intercept only") {
    Eigen::VectorXd y(6);
    y << 1, 0, 1, 0, 1, 0;
    const auto fit = logistic_fit(Eigen::MatrixXd::Ones(6, 1), y);
    CHECK(fit.converged);
    CHECK(std::abs(fit.coefficients[0]) < 1e-15);
  }
  SUBCASE("separated covariate") {
    Eigen::MatrixXd x(6, 1);
    x << -3, -2, -1, 1, 2, 3;
    Eigen::VectorXd y(6);
    y << 0, 0, 0, 1, 1, 1;
    const auto fit = logistic_fit(with_intercept(x), y);
    CHECK(fit.separation_flag);
    CHECK_FALSE(fit.converged);
  }
  SUBCASE("rank deficiency") {
    Eigen::MatrixXd x(5, 2);
    x << 1, 2, 2, 4, 3, 6, 4, 8, 5, 10;
    Eigen::VectorXd y(5);
    y << 0, 1, 0, 1, 1;
    CHECK_THROWS_AS(logistic_fit(with_intercept(x), y), DataError);
  }
  SUBCASE("agrees with reweighted least squares") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> z;
    for (int t = 0; t < 20; ++t) {
      Eigen::MatrixXd x(200, 3);
      for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = z(rng);
      const Eigen::MatrixXd d = with_intercept(x);
      Eigen::Vector4d truth(-0.3, 0.8, -0.5, 0.2);
      Eigen::VectorXd y(200);
      std::uniform_real_distribution<double> u;
      for (Eigen::Index i = 0; i < 200; ++i) y[i] = u(rng) < oracle::edge_prob(d.row(i).dot(truth)) ? 1.0 : 0.0;

      const auto fit = logistic_fit(d, y);
      REQUIRE(fit.converged);
      CHECK(fit.gradient_norm <= 1e-8);
      const Eigen::VectorXd ref = oracle::irls(d, y);
      CHECK((fit.coefficients - ref).cwiseAbs().maxCoeff() < 1e-6);

      // Shifting a covariate moves only the intercept.
      Eigen::MatrixXd shifted = d;
      shifted.col(2).array() += 5.0;
      const auto sf = logistic_fit(shifted, y);
      CHECK(std::abs(sf.coefficients[1] - fit.coefficients[1]) < 1e-7);
      CHECK(std::abs(sf.coefficients[2] - fit.coefficients[2]) < 1e-7);
      CHECK(std::abs(sf.coefficients[3] - fit.coefficients[3]) < 1e-7);
      CHECK(std::abs(sf.coefficients[0] - (fit.coefficients[0] - 5.0 * fit.coefficients[2])) < 1e-6);
    }
  }
}

TEST_CASE("per-group fits") {
  const Graph tri(3, {{0, 1}, {0, 2}, {1, 2}});
  const std::vector<GroupNetwork> groups{group("a", tri), group("b", tri)};
  const auto report = fit_by_group(groups, FitConfig{});
  REQUIRE(report.fits.size() == 2);
  CHECK(report.fits.at("a").selected.s == 0);
  CHECK(report.fits.at("b").selected.s == 0);

  SUBCASE("processing order does not matter") {
    std::vector<GroupNetwork> many;
    std::mt19937_64 rng(1);
    for (int k = 0; k < 6; ++k) {
      many.push_back(group("g" + std::to_string(k), sample_sbm(SbmParams::planted(60, -2.0, 3, 2.5), rng())));
    }
    const auto forward = fit_by_group(many, FitConfig{}, 0.5, Criterion::bic, 3);
    std::reverse(many.begin(), many.end());
    const auto backward = fit_by_group(many, FitConfig{}, 0.5, Criterion::bic, 1);
    for (const auto& [id, f] : forward.fits) {
      const auto& b = backward.fits.at(id);
      CHECK(f.selected.support == b.selected.support);
      CHECK(f.selected.fit.params.mu == b.selected.fit.params.mu);
      CHECK(f.selected.fit.params.beta == b.selected.fit.params.beta);
    }
  }
  SUBCASE("planted support is recovered") {
    int hits = 0;
    const auto truth = SbmParams::planted(200, -1.5, 2, std::log(200.0));
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto r = fit_by_group({group("x", sample_sbm(truth, seed))}, FitConfig{});
      const auto& sel = r.fits.at("x").selected.support;
      hits += sel == truth.support;
      CHECK(std::includes(sel.begin(), sel.end(), truth.support.begin(), truth.support.end()));
    }
    // Null hubs with z near 3.3 clear the BIC penalty in roughly one fit in seven.
    CHECK(hits >= 30);
  }
}

TEST_CASE("node table") {
  const Graph g(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
  const std::vector<GroupNetwork> groups{group("v", g), group("w", Graph(3, {{0, 1}, {0, 2}, {1, 2}}))};
  GroupFitReport fits;
  PathEntry e;
  e.s = 1;
  e.support = {0};
  e.fit.params = SbmParams::make(-2.0, {1.0, 0.0, 0.0, 0.0});
  fits.fits["v"] = GroupFit{"v", e};
  PathEntry er;
  er.fit.params = SbmParams::planted(3, -2.0, 0, 0.0);
  fits.fits["w"] = GroupFit{"w", er};

  const std::vector<Outcome> outcomes{{"0", "v", 1}, {"1", "v", 0}, {"2", "v", std::nullopt}, {"0", "w", 1}};
  const auto table = build_node_table(fits, groups, outcomes);
  REQUIRE(table.rows.size() == 7);
  const auto& lead = table.rows[0];
  CHECK(lead.beta_star == 0.0);
  CHECK(lead.leader == 1);
  CHECK(lead.degree == 3);
  CHECK(lead.outcome == 1);
  const auto& follower = table.rows[1];
  CHECK(follower.beta_star == -1.0);
  CHECK(follower.leader == 0);
  CHECK_FALSE(table.rows[2].outcome);
  CHECK_FALSE(table.rows[3].outcome);
  for (const auto& r : table.rows) {
    CHECK(r.beta_star == r.beta_hat + r.mu_hat_group / 2.0);
    CHECK(r.leader == (r.beta_hat > 0 ? 1 : 0));
  }

  CHECK_THROWS_AS(build_node_table(fits, groups, {{"9", "v", 1}}), DataError);
  CHECK_THROWS_AS(build_node_table(fits, groups, {{"0", "zz", 1}}), DataError);
}

TEST_CASE("take-up models") {
  SUBCASE("generative round trip for the beta model") {
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> z;
      std::uniform_real_distribution<double> u;
      NodeTable table;
      for (int i = 0; i < 2000; ++i) {
        NodeRow r;
        r.node_id = std::to_string(i);
        r.group_id = "g";
        r.degree = 1 + static_cast<std::int64_t>(rng() % 20);
        r.eigenvector = 1.0 + u(rng);
        r.beta_hat = u(rng) < 0.3 ? 2.0 * u(rng) : 0.0;
        r.mu_hat_group = -3.0 + z(rng);
        r.beta_star = r.beta_hat + r.mu_hat_group / 2.0;
        r.leader = r.beta_hat > 0;
        r.outcome = u(rng) < oracle::edge_prob(-1.0 + 0.2 * r.beta_star) ? 1 : 0;
        table.rows.push_back(r);
      }
      const auto models = run_takeup_models(table);
      REQUIRE(models.size() == 8);
      const auto& m3 = models[2];
      CHECK(m3.terms == std::vector<std::string>{"Beta"});
      covered += std::abs(m3.fit.coefficients[1] - 0.2) <= 3 * m3.fit.standard_errors[1];
    }
    CHECK(covered >= 95);
  }
  SUBCASE("all-zero outcomes") {
    NodeTable table;
    for (int i = 0; i < 50; ++i) {
      NodeRow r;
      r.degree = 1 + i % 7;
      r.eigenvector = 0.1 * i;
      r.beta_hat = i % 5 == 0 ? 1.0 + 0.01 * i : 0.0;
      r.mu_hat_group = -2.0 + 0.01 * i;
      r.beta_star = r.beta_hat + r.mu_hat_group / 2.0;
      r.leader = r.beta_hat > 0;
      r.outcome = 0;
      table.rows.push_back(r);
    }
    for (const auto& m : run_takeup_models(table)) {
      CHECK(m.fit.separation_flag);
      CHECK_FALSE(m.fit.converged);
    }
  }
}

TEST_CASE("input formats") {
  const auto outcomes = parse_outcomes_csv("node_id,group_id,takeup\n1,a,1\n2,a,NA\n3,a,\n4,b,0\n");
  REQUIRE(outcomes.size() == 4);
  CHECK(outcomes[0].takeup == 1);
  CHECK_FALSE(outcomes[1].takeup);
  CHECK_FALSE(outcomes[2].takeup);
  CHECK(outcomes[3].takeup == 0);
  CHECK_THROWS_AS(parse_outcomes_csv("id,takeup\n"), DataError);
  CHECK_THROWS_AS(parse_outcomes_csv("node_id,group_id,takeup\n1,a,2\n"), DataError);

  const auto g = parse_adjacency_csv("0,1,0\n0,0,1\n0,1,0\n");
  CHECK(g.n() == 3);
  CHECK(g.d_plus() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK_THROWS_AS(parse_adjacency_csv("0,1\n1\n"), DataError);
  CHECK_THROWS_AS(parse_adjacency_csv("0,2\n2,0\n"), DataError);

  const auto dir = std::filesystem::temp_directory_path() / "sbm_groups_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.tsv") << "0 1\n1 2\n";
  std::ofstream(dir / "a.labels") << "h10\nh11\nh12\n";
  std::ofstream(dir / "b.tsv") << "n=4\n0 1\n";
  const auto groups = load_groups(dir);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].id == "a");
  CHECK(groups[0].label(2) == "h12");
  CHECK(groups[1].graph.n() == 4);
  CHECK(groups[1].label(3) == "3");
}
