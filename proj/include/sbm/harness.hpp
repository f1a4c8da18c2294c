#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbm/graph.hpp"
#include "sbm/path.hpp"
#include "sbm/solver.hpp"

namespace sbm {

/// A parameter that may scale with n: a constant, sign * sqrt(log n) or sign * log n.
struct ScaledValue {
  enum class Kind { constant, sqrt_log_n, log_n };
  Kind kind = Kind::constant;
  double value = 0.0;  // the constant, or the sign for the scaled kinds

  double resolve(std::size_t n) const;
  std::string to_string() const;
};

/// Sparsity of the planted support: a fixed count or one of the grid rules
/// floor(sqrt(n/2)), floor(sqrt(n)), floor(2 sqrt(n)).
struct SupportSize {
  enum class Kind { fixed, sqrt_half_n, sqrt_n, two_sqrt_n };
  Kind kind = Kind::fixed;
  std::size_t value = 2;

  std::size_t resolve(std::size_t n) const;
  std::string to_string() const;
};

struct MonteCarloConfig {
  std::size_t n = 100;
  SupportSize s0;
  ScaledValue mu0{ScaledValue::Kind::constant, -1.5};
  ScaledValue beta{ScaledValue::Kind::log_n, 1.0};
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  std::optional<std::size_t> max_size;  // default max{40, floor(4 sqrt(n))}
  Criterion criterion = Criterion::bic;
  bool include_null = false;
  FitConfig fit;

  std::size_t effective_max_size() const;
  /// Nonzero beta on nodes 0..s0-1.
  SbmParams truth() const;
  void validate() const;
};

/// key=value lines mirroring MonteCarloConfig. Values for mu0 and beta are a
/// real number, "sqrt_log_n", "log_n" (optionally negated with '-'); s0 is an
/// integer or "sqrt_half_n", "sqrt_n", "two_sqrt_n".
MonteCarloConfig parse_mc_config(const std::string& text);
MonteCarloConfig load_mc_config(const std::string& path);

struct RepRecord {
  std::size_t rep = 0;
  bool failed = false;
  std::size_t s_hat = 0;
  bool correct = false;
  std::uint64_t support_hash = 0;
  double l1_beta_error = 0.0;
  double abs_mu_error = 0.0;
  bool converged = false;
};

struct SummaryStats {
  double mean = 0.0;
  double q10 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q90 = 0.0;
};

struct MonteCarloSummary {
  std::size_t reps_completed = 0;
  std::size_t failures = 0;
  std::size_t nonconverged = 0;
  double correct_support_freq = 0.0;
  double mean_s_hat_minus_s0 = 0.0;
  SummaryStats l1_beta_error;
  SummaryStats abs_mu_error;
};

struct MonteCarloRun {
  std::vector<RepRecord> records;  // ordered by rep
  MonteCarloSummary summary;
};

/// Every replication draws from its own stream derived from (seed, rep), so
/// the result does not depend on `threads`.
MonteCarloRun run_monte_carlo(const MonteCarloConfig& cfg, unsigned threads = 1);

MonteCarloSummary summarize(const std::vector<RepRecord>& records, std::size_t s0);

std::uint64_t support_hash(const Support& support);

void write_summary_csv(const MonteCarloConfig& cfg, const MonteCarloSummary& summary, std::ostream& out);
void write_records_csv(const std::vector<RepRecord>& records, std::ostream& out);
std::vector<RepRecord> read_records_csv(std::istream& in);

/// (k, p_k) for every degree k that occurs, ascending.
std::vector<std::pair<std::int64_t, double>> degree_distribution(const Graph& g);

struct OverlayRow {
  std::int64_t k = 0;
  double observed = 0.0;
  double fitted = 0.0;   // averaged over simulated graphs
  double poisson = 0.0;  // Poisson with the Erdos-Renyi mean degree
};

/// Observed degree distribution next to the average over `reps` graphs drawn
/// from the fitted parameters and the Poisson reference, on a common grid 0..K.
std::vector<OverlayRow> model_fit_overlay(const Graph& g, const FitResult& fit, std::size_t reps,
                                          std::uint64_t seed);

}  // namespace sbm
