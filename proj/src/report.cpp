#include "sbm/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sbm {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json opt(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

}  // namespace

nlohmann::json fit_to_json(const PathEntry& entry, std::size_t n) {
  const auto& p = entry.fit.params;
  nlohmann::json beta = nlohmann::json::object();
  for (auto i : p.support) beta[std::to_string(i)] = p.beta[i];
  return {
      {"n", n},
      {"s", entry.s},
      {"support", entry.support},
      {"mu_hat", p.mu},
      {"beta_hat", beta},
      {"nll", entry.fit.nll},
      {"bic", entry.bic},
      {"bic_star", opt(entry.bic_star)},
      {"converged", entry.fit.converged},
      {"at_boundary", entry.fit.any_at_boundary()},
      {"existence_ok", entry.fit.existence_ok},
  };
}

nlohmann::json path_to_json(const SolutionPath& path) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : path.entries) entries.push_back(fit_to_json(e, path.n));
  nlohmann::json selected = {{"bic", select(path, Criterion::bic).s}};
  if (path.d_plus > 0) selected["bic_star"] = select(path, Criterion::bic_star).s;
  else selected["bic_star"] = nullptr;
  return {
      {"n", path.n},
      {"d_plus", path.d_plus},
      {"selected", selected},
      {"entries", entries},
      {"warnings", path.warnings},
  };
}

nlohmann::json er_to_json(const ErFit& fit) {
  nlohmann::json j = {
      {"n", fit.n},
      {"d_plus", fit.d_plus},
      {"p_hat", fit.p_hat},
      {"mu_hat", opt(fit.mu_hat)},
      {"se_p_plugin", opt(fit.se_p_plugin)},
      {"se_mu_plugin", opt(fit.se_mu_plugin)},
      {"boundary", fit.boundary},
  };
  if (fit.gamma) {
    j["gamma"] = *fit.gamma;
    j["p_dagger"] = opt(fit.p_dagger);
    j["mu_dagger"] = opt(fit.mu_dagger);
    j["se_p_dagger"] = opt(fit.se_p_asymptotic);
    j["se_mu_asymptotic"] = opt(fit.se_mu_asymptotic);
  }
  return j;
}

void write_degree_distribution_csv(const std::vector<std::pair<std::int64_t, double>>& dist, std::ostream& out) {
  out << "k,p_k\n";
  for (const auto& [k, p] : dist) out << k << ',' << num(p) << '\n';
}

void write_overlay_csv(const std::vector<OverlayRow>& rows, std::ostream& out) {
  out << "k,observed,fitted,poisson\n";
  for (const auto& r : rows) {
    out << r.k << ',' << num(r.observed) << ',' << num(r.fitted) << ',' << num(r.poisson) << '\n';
  }
}

void write_takeup_tables_csv(const std::vector<TakeupModel>& models, std::ostream& out) {
  out << "model,term,estimate,std_error,z,p_value,n,loglik,converged,separation\n";
  for (const auto& m : models) {
    const auto& f = m.fit;
    for (Eigen::Index k = 0; k < f.coefficients.size(); ++k) {
      const std::string term = k == 0 ? "(Intercept)" : m.terms[static_cast<std::size_t>(k - 1)];
      out << m.index << ',' << term << ',' << num(f.coefficients[k]) << ',' << num(f.standard_errors[k])
          << ',' << num(f.z_values[k]) << ',' << num(f.p_values[k]) << ',' << m.observations << ','
          << num(f.loglik) << ',' << (f.converged ? 1 : 0) << ',' << (f.separation_flag ? 1 : 0) << '\n';
    }
  }
}

void write_node_table_csv(const NodeTable& table, std::ostream& out) {
  out << "node_id,group_id,takeup,degree,eigenvector,beta_hat,mu_hat_group,beta_star,leader\n";
  for (const auto& r : table.rows) {
    out << r.node_id << ',' << r.group_id << ',';
    if (r.outcome) out << *r.outcome;
    else out << "NA";
    out << ',' << r.degree << ',' << num(r.eigenvector) << ',' << num(r.beta_hat) << ','
        << num(r.mu_hat_group) << ',' << num(r.beta_star) << ',' << r.leader << '\n';
  }
}

}  // namespace sbm
