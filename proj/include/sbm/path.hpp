#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbm/graph.hpp"
#include "sbm/solver.hpp"

namespace sbm {

enum class Criterion { bic, bic_star };

Criterion parse_criterion(const std::string& name);
std::string to_string(Criterion c);

struct PathEntry {
  std::size_t s = 0;
  Support support;
  FitResult fit;
  double bic = 0.0;
  std::optional<double> bic_star;  // absent when d_plus = 0

  double criterion(Criterion c) const;
};

/// Nested l0-constrained fits along the degree-sorted supports.
/// entries[0] is always the s = 0 (Erdos-Renyi) fit; the remaining entries
/// follow the admissible cumulative levels in increasing order.
struct SolutionPath {
  std::size_t n = 0;
  std::int64_t d_plus = 0;
  std::vector<PathEntry> entries;
  std::vector<std::string> warnings;
};

/// 2 nll + s log(n(n-1)/2) or 2 nll + s log(d_plus), s = |fit.support|.
double information_criterion(const FitResult& fit, std::size_t n, std::int64_t d_plus,
                             Criterion variant);

/// Fits every admissible level s <= max_size, warm-starting each level from
/// the previous optimum.
SolutionPath solution_path(const Graph& g, std::size_t max_size, const FitConfig& cfg = {});

/// Entry minimizing the criterion; ties go to the smaller s. The s = 0 entry
/// competes only with `include_null`, or when it is the only entry.
const PathEntry& select(const SolutionPath& path, Criterion variant, bool include_null = false);

struct BruteForceResult {
  FitResult fit;
  bool tie = false;  // another support reached the same optimum
};

/// Global minimizer of ell_n over all supports of size <= s by exhaustive
/// enumeration. Test oracle; refuses graphs with more than 12 nodes.
BruteForceResult brute_force_l0(const Graph& g, std::size_t s, const FitConfig& cfg = {});

}  // namespace sbm
