#include "sbm/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "sbm/errors.hpp"
#include "sbm/parallel.hpp"

namespace sbm {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw DataError(key + ": expected a number, got '" + value + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty() || value.front() == '-') {
    throw DataError(key + ": expected a nonnegative integer, got '" + value + "'");
  }
  return v;
}

ScaledValue parse_scaled(const std::string& key, const std::string& value) {
  const bool negative = !value.empty() && value.front() == '-';
  const std::string body = negative ? value.substr(1) : value;
  if (body == "sqrt_log_n") return {ScaledValue::Kind::sqrt_log_n, negative ? -1.0 : 1.0};
  if (body == "log_n") return {ScaledValue::Kind::log_n, negative ? -1.0 : 1.0};
  return {ScaledValue::Kind::constant, parse_real(key, value)};
}

SummaryStats describe(std::vector<double> v) {
  SummaryStats s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += x;
  s.mean = total / static_cast<double>(v.size());
  auto quantile = [&v](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.q10 = quantile(0.10);
  s.q25 = quantile(0.25);
  s.median = quantile(0.5);
  s.q75 = quantile(0.75);
  s.q90 = quantile(0.90);
  return s;
}

}  // namespace

double ScaledValue::resolve(std::size_t n) const {
  const double log_n = std::log(static_cast<double>(n));
  switch (kind) {
    case Kind::constant: return value;
    case Kind::sqrt_log_n: return value * std::sqrt(log_n);
    case Kind::log_n: return value * log_n;
  }
  return value;
}

std::string ScaledValue::to_string() const {
  switch (kind) {
    case Kind::constant: return fmt_double(value);
    case Kind::sqrt_log_n: return value < 0 ? "-sqrt_log_n" : "sqrt_log_n";
    case Kind::log_n: return value < 0 ? "-log_n" : "log_n";
  }
  return {};
}

std::size_t SupportSize::resolve(std::size_t n) const {
  const double nn = static_cast<double>(n);
  switch (kind) {
    case Kind::fixed: return value;
    case Kind::sqrt_half_n: return static_cast<std::size_t>(std::floor(std::sqrt(nn / 2.0)));
    case Kind::sqrt_n: return static_cast<std::size_t>(std::floor(std::sqrt(nn)));
    case Kind::two_sqrt_n: return static_cast<std::size_t>(std::floor(2.0 * std::sqrt(nn)));
  }
  return value;
}

std::string SupportSize::to_string() const {
  switch (kind) {
    case Kind::fixed: return std::to_string(value);
    case Kind::sqrt_half_n: return "sqrt_half_n";
    case Kind::sqrt_n: return "sqrt_n";
    case Kind::two_sqrt_n: return "two_sqrt_n";
  }
  return {};
}

std::size_t MonteCarloConfig::effective_max_size() const {
  if (max_size) return *max_size;
  return std::max<std::size_t>(40, static_cast<std::size_t>(std::floor(4.0 * std::sqrt(static_cast<double>(n)))));
}

SbmParams MonteCarloConfig::truth() const {
  return SbmParams::planted(n, mu0.resolve(n), s0.resolve(n), beta.resolve(n));
}

void MonteCarloConfig::validate() const {
  if (n < 2) throw DataError("n must be at least 2");
  if (s0.resolve(n) > n - 1) throw DataError("s0 must be at most n - 1");
  if (reps < 1) throw DataError("reps must be at least 1");
  if (effective_max_size() < 1) throw DataError("max_size must be at least 1");
  try {
    fit.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

MonteCarloConfig parse_mc_config(const std::string& text) {
  MonteCarloConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw DataError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    if (key == "n") {
      cfg.n = parse_unsigned(key, value);
    } else if (key == "s0") {
      if (value == "sqrt_half_n") cfg.s0 = {SupportSize::Kind::sqrt_half_n, 0};
      else if (value == "sqrt_n") cfg.s0 = {SupportSize::Kind::sqrt_n, 0};
      else if (value == "two_sqrt_n") cfg.s0 = {SupportSize::Kind::two_sqrt_n, 0};
      else cfg.s0 = {SupportSize::Kind::fixed, parse_unsigned(key, value)};
    } else if (key == "mu0") {
      cfg.mu0 = parse_scaled(key, value);
    } else if (key == "beta") {
      cfg.beta = parse_scaled(key, value);
    } else if (key == "reps") {
      cfg.reps = parse_unsigned(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_unsigned(key, value);
    } else if (key == "max_size") {
      cfg.max_size = parse_unsigned(key, value);
    } else if (key == "criterion") {
      try {
        cfg.criterion = parse_criterion(value);
      } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
      }
    } else if (key == "include_null") {
      if (value != "true" && value != "false") throw DataError("include_null must be true or false");
      cfg.include_null = value == "true";
    } else if (key == "m1") {
      cfg.fit.m1 = parse_real(key, value);
    } else if (key == "m2") {
      cfg.fit.m2 = parse_real(key, value);
    } else if (key == "tol") {
      cfg.fit.tol = parse_real(key, value);
    } else if (key == "max_iter") {
      cfg.fit.max_iter = static_cast<int>(parse_unsigned(key, value));
    } else {
      throw DataError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

MonteCarloConfig load_mc_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mc_config(buf.str());
}

std::uint64_t support_hash(const Support& support) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the 4-byte ids
  for (auto id : support) {
    for (int b = 0; b < 4; ++b) {
      h ^= (id >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

MonteCarloRun run_monte_carlo(const MonteCarloConfig& cfg, unsigned threads) {
  cfg.validate();
  const auto truth = cfg.truth();
  const auto s0 = truth.support.size();
  const auto max_size = cfg.effective_max_size();

  MonteCarloRun run;
  run.records.resize(cfg.reps);
  parallel_for(cfg.reps, threads, [&](std::size_t rep) {
    RepRecord& rec = run.records[rep];
    rec.rep = rep;
    try {
      std::mt19937_64 rng(stream_seed(cfg.seed, rep));
      const auto g = sample_sbm(truth, rng);
      const auto path = solution_path(g, max_size, cfg.fit);
      const auto& chosen = select(path, cfg.criterion, cfg.include_null);
      const auto& est = chosen.fit.params;
      rec.s_hat = chosen.s;
      rec.correct = chosen.support == truth.support;
      rec.support_hash = support_hash(chosen.support);
      double l1 = 0.0;
      for (std::size_t i = 0; i < cfg.n; ++i) l1 += std::abs(est.beta[i] - truth.beta[i]);
      rec.l1_beta_error = l1;
      rec.abs_mu_error = std::abs(est.mu - truth.mu);
      rec.converged = chosen.fit.converged;
    } catch (const std::exception&) {
      rec.failed = true;
    }
  });
  run.summary = summarize(run.records, s0);
  return run;
}

MonteCarloSummary summarize(const std::vector<RepRecord>& records, std::size_t s0) {
  MonteCarloSummary s;
  std::vector<double> l1, mu;
  double correct = 0.0, diff = 0.0;
  for (const auto& r : records) {
    if (r.failed) {
      ++s.failures;
      continue;
    }
    ++s.reps_completed;
    if (!r.converged) ++s.nonconverged;
    correct += r.correct ? 1.0 : 0.0;
    diff += static_cast<double>(r.s_hat) - static_cast<double>(s0);
    l1.push_back(r.l1_beta_error);
    mu.push_back(r.abs_mu_error);
  }
  if (s.reps_completed > 0) {
    s.correct_support_freq = correct / static_cast<double>(s.reps_completed);
    s.mean_s_hat_minus_s0 = diff / static_cast<double>(s.reps_completed);
  }
  s.l1_beta_error = describe(std::move(l1));
  s.abs_mu_error = describe(std::move(mu));
  return s;
}

void write_summary_csv(const MonteCarloConfig& cfg, const MonteCarloSummary& s, std::ostream& out) {
  out << "metric,value\n";
  out << "n," << cfg.n << '\n';
  out << "s0," << cfg.s0.resolve(cfg.n) << '\n';
  out << "mu0," << fmt_double(cfg.mu0.resolve(cfg.n)) << '\n';
  out << "beta0," << fmt_double(cfg.beta.resolve(cfg.n)) << '\n';
  out << "seed," << cfg.seed << '\n';
  out << "max_size," << cfg.effective_max_size() << '\n';
  out << "criterion," << to_string(cfg.criterion) << '\n';
  out << "reps_completed," << s.reps_completed << '\n';
  out << "failures," << s.failures << '\n';
  out << "nonconverged," << s.nonconverged << '\n';
  out << "correct_support_freq," << fmt_double(s.correct_support_freq) << '\n';
  out << "mean_s_hat_minus_s0," << fmt_double(s.mean_s_hat_minus_s0) << '\n';
  auto stats = [&out](const std::string& name, const SummaryStats& st) {
    out << name << "_mean," << fmt_double(st.mean) << '\n';
    out << name << "_q10," << fmt_double(st.q10) << '\n';
    out << name << "_q25," << fmt_double(st.q25) << '\n';
    out << name << "_median," << fmt_double(st.median) << '\n';
    out << name << "_q75," << fmt_double(st.q75) << '\n';
    out << name << "_q90," << fmt_double(st.q90) << '\n';
  };
  stats("l1_beta_error", s.l1_beta_error);
  stats("abs_mu_error", s.abs_mu_error);
}

void write_records_csv(const std::vector<RepRecord>& records, std::ostream& out) {
  out << "rep,failed,s_hat,correct,support_hash,l1_beta_error,abs_mu_error,converged\n";
  for (const auto& r : records) {
    out << r.rep << ',' << int(r.failed) << ',' << r.s_hat << ',' << int(r.correct) << ','
        << r.support_hash << ',' << fmt_double(r.l1_beta_error) << ',' << fmt_double(r.abs_mu_error)
        << ',' << int(r.converged) << '\n';
  }
}

std::vector<RepRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "rep,failed,s_hat,correct,support_hash,l1_beta_error,abs_mu_error,converged") {
    throw DataError("unexpected records header");
  }
  std::vector<RepRecord> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(trim(field));
    if (f.size() != 8) throw DataError("records row must have 8 fields");
    RepRecord r;
    r.rep = parse_unsigned("rep", f[0]);
    r.failed = f[1] == "1";
    r.s_hat = parse_unsigned("s_hat", f[2]);
    r.correct = f[3] == "1";
    r.support_hash = parse_unsigned("support_hash", f[4]);
    r.l1_beta_error = parse_real("l1_beta_error", f[5]);
    r.abs_mu_error = parse_real("abs_mu_error", f[6]);
    r.converged = f[7] == "1";
    out.push_back(r);
  }
  return out;
}

std::vector<std::pair<std::int64_t, double>> degree_distribution(const Graph& g) {
  std::map<std::int64_t, std::size_t> counts;
  for (auto d : g.degrees()) ++counts[d];
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(counts.size());
  const double n = static_cast<double>(g.n());
  for (const auto& [k, c] : counts) out.emplace_back(k, static_cast<double>(c) / n);
  return out;
}

std::vector<OverlayRow> model_fit_overlay(const Graph& g, const FitResult& fit, std::size_t reps,
                                          std::uint64_t seed) {
  if (!fit.converged) throw std::invalid_argument("overlay needs a converged fit");
  if (fit.params.n() != g.n()) throw std::invalid_argument("fit and graph disagree on n");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");

  std::vector<double> fitted;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto sim = sample_sbm(fit.params, stream_seed(seed, r));
    for (const auto& [k, p] : degree_distribution(sim)) {
      if (static_cast<std::size_t>(k) >= fitted.size()) fitted.resize(static_cast<std::size_t>(k) + 1, 0.0);
      fitted[static_cast<std::size_t>(k)] += p;
    }
  }
  for (auto& v : fitted) v /= static_cast<double>(reps);

  const auto observed = degree_distribution(g);
  const std::int64_t kmax = std::max<std::int64_t>(observed.back().first, static_cast<std::int64_t>(fitted.size()) - 1);
  const double mean_degree = 2.0 * static_cast<double>(g.d_plus()) / static_cast<double>(g.n());

  std::vector<OverlayRow> rows(static_cast<std::size_t>(kmax + 1));
  for (std::int64_t k = 0; k <= kmax; ++k) {
    auto& row = rows[static_cast<std::size_t>(k)];
    row.k = k;
    if (static_cast<std::size_t>(k) < fitted.size()) row.fitted = fitted[static_cast<std::size_t>(k)];
    const double kk = static_cast<double>(k);
    row.poisson = mean_degree > 0 ? std::exp(kk * std::log(mean_degree) - mean_degree - std::lgamma(kk + 1.0))
                                  : (k == 0 ? 1.0 : 0.0);
  }
  for (const auto& [k, p] : observed) rows[static_cast<std::size_t>(k)].observed = p;
  return rows;
}

}  // namespace sbm
