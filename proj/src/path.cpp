#include "sbm/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbm {

Criterion parse_criterion(const std::string& name) {
  if (name == "bic") return Criterion::bic;
  if (name == "bic_star") return Criterion::bic_star;
  throw std::invalid_argument("unknown criterion '" + name + "' (expected bic or bic_star)");
}

std::string to_string(Criterion c) { return c == Criterion::bic ? "bic" : "bic_star"; }

double PathEntry::criterion(Criterion c) const {
  if (c == Criterion::bic) return bic;
  if (!bic_star) throw std::invalid_argument("bic_star is undefined for a graph without edges");
  return *bic_star;
}

double information_criterion(const FitResult& fit, std::size_t n, std::int64_t d_plus,
                             Criterion variant) {
  const auto s = static_cast<double>(fit.support.size());
  if (variant == Criterion::bic) {
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return 2.0 * fit.nll + (s > 0 ? s * std::log(pairs) : 0.0);
  }
  if (d_plus <= 0) throw std::invalid_argument("bic_star requires d_plus > 0");
  return 2.0 * fit.nll + s * std::log(static_cast<double>(d_plus));
}

namespace {

PathEntry make_entry(const Graph& g, FitResult fit) {
  PathEntry e;
  e.s = fit.support.size();
  e.support = fit.support;
  const auto d_plus = static_cast<std::int64_t>(g.d_plus());
  e.bic = information_criterion(fit, g.n(), d_plus, Criterion::bic);
  if (d_plus > 0) e.bic_star = information_criterion(fit, g.n(), d_plus, Criterion::bic_star);
  e.fit = std::move(fit);
  return e;
}

}  // namespace

SolutionPath solution_path(const Graph& g, std::size_t max_size, const FitConfig& cfg) {
  if (max_size < 1) throw std::invalid_argument("max_size must be at least 1");
  SolutionPath path;
  path.n = g.n();
  path.d_plus = static_cast<std::int64_t>(g.d_plus());

  FitConfig level_cfg = cfg;
  path.entries.push_back(make_entry(g, fit_support(g, {}, level_cfg)));

  const auto partition = degree_partition(g);
  if (partition.cumulative.empty()) {
    path.warnings.emplace_back("all degrees are equal; only the Erdos-Renyi fit is admissible");
    return path;
  }
  for (std::size_t k = 0; k < partition.cumulative.size(); ++k) {
    if (partition.cumulative[k] > max_size) break;
    // The previous optimum is feasible for the enlarged support.
    level_cfg.warm_start = path.entries.back().fit.params;
    path.entries.push_back(make_entry(g, fit_support(g, partition.top_groups(k + 1), level_cfg)));
  }
  if (path.entries.size() == 1) {
    path.warnings.push_back("no admissible level fits under max_size=" + std::to_string(max_size));
  }
  return path;
}

const PathEntry& select(const SolutionPath& path, Criterion variant, bool include_null) {
  if (path.entries.empty()) throw std::invalid_argument("empty solution path");
  const std::size_t first = (include_null || path.entries.size() == 1) ? 0 : 1;
  std::size_t best = first;
  for (std::size_t k = first + 1; k < path.entries.size(); ++k) {
    if (path.entries[k].criterion(variant) < path.entries[best].criterion(variant)) best = k;
  }
  return path.entries[best];
}

BruteForceResult brute_force_l0(const Graph& g, std::size_t s, const FitConfig& cfg) {
  if (g.n() > 12) throw std::invalid_argument("brute_force_l0 is limited to n <= 12");
  if (s >= g.n()) throw std::invalid_argument("s must be at most n - 1");

  // The optimum over supports of size <= s is attained at size exactly s:
  // every smaller support is contained in one of size s, and enlarging the
  // support never increases the optimum.
  std::vector<bool> mask(g.n(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(s), true);

  BruteForceResult best;
  bool have = false;
  do {
    Support support;
    for (NodeId i = 0; i < g.n(); ++i) {
      if (mask[i]) support.push_back(i);
    }
    auto fit = fit_support(g, support, cfg);
    if (!have) {
      best.fit = std::move(fit);
      have = true;
      continue;
    }
    const double scale = std::max(1.0, std::abs(best.fit.nll));
    if (fit.nll < best.fit.nll - 1e-9 * scale) {
      best.fit = std::move(fit);
      best.tie = false;
    } else if (std::abs(fit.nll - best.fit.nll) <= 1e-9 * scale) {
      best.tie = true;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace sbm
