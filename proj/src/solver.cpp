#include "sbm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbm {
namespace {

constexpr double kRidge = 1e-10;
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-20;
constexpr double kActiveMargin = 1e-6;

struct Box {
  Eigen::VectorXd lo, hi;

  Eigen::VectorXd project(const Eigen::VectorXd& x) const { return x.cwiseMax(lo).cwiseMin(hi); }
};

Box make_box(std::size_t dim, const FitConfig& cfg) {
  Box box{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)),
          Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), cfg.m2)};
  box.lo[0] = -cfg.m1;
  box.hi[0] = cfg.m1;
  return box;
}

Eigen::VectorXd initial_point(const BlockObjective& obj, const Box& box, const FitConfig& cfg) {
  const auto& stats = obj.stats();
  if (cfg.warm_start) {
    const auto& w = *cfg.warm_start;
    if (w.n() != stats.n) throw std::invalid_argument("warm start has the wrong n");
    for (auto i : w.support) {
      if (!std::binary_search(stats.support.begin(), stats.support.end(), i)) {
        throw std::invalid_argument("warm start has nonzero beta outside the support");
      }
    }
    return box.project(obj.pack(w));
  }
  const double pairs = static_cast<double>(stats.n) * static_cast<double>(stats.n - 1) / 2.0;
  double density = pairs > 0 ? static_cast<double>(stats.d_plus) / pairs : 0.5;
  const double floor = pairs > 0 ? 0.5 / pairs : 0.25;
  density = std::clamp(density, floor, 1.0 - floor);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(obj.dim()));
  x[0] = std::log(density / (1.0 - density));
  return box.project(x);
}

// Support nodes with equal degree are interchangeable, so the optimum gives
// them equal beta. Averaging within each tie group keeps iterates on that
// subspace and, by convexity, never raises the objective.
std::vector<std::vector<Eigen::Index>> tie_groups(const SuffStats& stats) {
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<std::size_t> order(stats.support.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return stats.d_support[a] < stats.d_support[b]; });
  for (std::size_t a = 0; a < order.size();) {
    std::size_t b = a;
    std::vector<Eigen::Index> group;
    while (b < order.size() && stats.d_support[order[b]] == stats.d_support[order[a]]) {
      group.push_back(static_cast<Eigen::Index>(1 + order[b]));
      ++b;
    }
    if (group.size() > 1) groups.push_back(std::move(group));
    a = b;
  }
  return groups;
}

void symmetrize(Eigen::VectorXd& x, const std::vector<std::vector<Eigen::Index>>& groups) {
  for (const auto& group : groups) {
    double mean = 0.0;
    for (auto i : group) mean += x[i];
    mean /= static_cast<double>(group.size());
    for (auto i : group) x[i] = mean;
  }
}

}  // namespace

void FitConfig::validate() const {
  if (!(std::isfinite(m1) && m1 > 0)) throw std::invalid_argument("m1 must be positive and finite");
  if (!(std::isfinite(m2) && m2 > 0)) throw std::invalid_argument("m2 must be positive and finite");
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
}

bool FitResult::any_at_boundary() const {
  return std::any_of(at_boundary.begin(), at_boundary.end(), [](bool b) { return b; });
}

ExistenceReport existence_check(const SuffStats& stats) {
  ExistenceReport report;
  const auto pairs = static_cast<std::int64_t>(stats.n) * static_cast<std::int64_t>(stats.n - 1) / 2;
  if (stats.d_plus <= 0) report.reasons.emplace_back("d_plus at lower boundary");
  if (stats.d_plus >= pairs) report.reasons.emplace_back("d_plus at upper boundary");
  const auto max_degree = static_cast<std::int64_t>(stats.n) - 1;
  for (std::size_t k = 0; k < stats.support.size(); ++k) {
    const auto node = std::to_string(stats.support[k]);
    if (stats.d_support[k] <= 0) report.reasons.push_back("d_i at lower boundary (node " + node + ")");
    if (stats.d_support[k] >= max_degree) {
      report.reasons.push_back("d_i at upper boundary (node " + node + ")");
    }
  }
  report.ok = report.reasons.empty();
  return report;
}

ExistenceReport existence_check(const Graph& g, const Support& support) {
  return existence_check(SuffStats::from_graph(g, support));
}

FitResult fit_support(const Graph& g, const Support& support, const FitConfig& cfg) {
  return fit_support(SuffStats::from_graph(g, support), cfg);
}

FitResult fit_support(const SuffStats& stats, const FitConfig& cfg) {
  cfg.validate();
  const BlockObjective obj(stats);
  const auto dim = static_cast<Eigen::Index>(obj.dim());
  const Box box = make_box(obj.dim(), cfg);

  const auto ties = tie_groups(stats);
  Eigen::VectorXd x = initial_point(obj, box, cfg);
  symmetrize(x, ties);
  double f = obj.value(x);
  Eigen::VectorXd g = obj.gradient(x);

  FitResult result;
  int iter = 0;
  double pg_inf = 0.0;
  for (;; ++iter) {
    const Eigen::VectorXd pg = x - box.project(x - g);
    pg_inf = pg.lpNorm<Eigen::Infinity>();
    const double eps = std::min(kActiveMargin, pg.norm());

    std::vector<Eigen::Index> free;
    std::vector<bool> active(static_cast<std::size_t>(dim), false);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const bool pinned = (x[i] <= box.lo[i] + eps && g[i] > 0) || (x[i] >= box.hi[i] - eps && g[i] < 0);
      active[static_cast<std::size_t>(i)] = pinned;
      if (!pinned) free.push_back(i);
    }

    Eigen::VectorXd dir = Eigen::VectorXd::Zero(dim);
    double decrement = 0.0;
    if (!free.empty()) {
      const auto nf = static_cast<Eigen::Index>(free.size());
      const Eigen::MatrixXd h = obj.hessian(x);
      Eigen::MatrixXd hf(nf, nf);
      Eigen::VectorXd gf(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        gf[a] = g[free[static_cast<std::size_t>(a)]];
        for (Eigen::Index b = 0; b < nf; ++b) {
          hf(a, b) = h(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
        }
      }
      // Ridge relative to the curvature scale, so steps along nearly flat
      // directions are not throttled.
      hf.diagonal().array() += kRidge * std::max(hf.diagonal().maxCoeff(), 1e-300);
      const Eigen::VectorXd df = hf.ldlt().solve(-gf);
      decrement = -gf.dot(df);
      for (Eigen::Index a = 0; a < nf; ++a) dir[free[static_cast<std::size_t>(a)]] = df[a];
    }
    // Converged once the projected gradient is small and a further Newton
    // step predicts no meaningful decrease; the second test lets coordinates
    // drifting toward a face in a flat direction reach it.
    if (pg_inf <= cfg.tol && decrement <= cfg.tol * cfg.tol) break;
    if (iter >= cfg.max_iter) break;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (active[static_cast<std::size_t>(i)]) dir[i] = -g[i];
    }

    bool accepted = false;
    for (double t = 1.0; t >= kMinStep; t *= 0.5) {
      Eigen::VectorXd trial = box.project(x + t * dir);
      symmetrize(trial, ties);
      const double ft = obj.value(trial);
      if (!std::isfinite(ft)) continue;
      double predicted = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        predicted += active[static_cast<std::size_t>(i)] ? g[i] * (x[i] - trial[i]) : 0.0;
      }
      predicted += t * decrement;
      // Near the optimum rounding can hide the predicted decrease; a full
      // step that does not increase f is still taken.
      if (f - ft >= kArmijo * predicted || (t == 1.0 && ft <= f)) {
        x = trial;
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // At the rounding floor of f the decrease is invisible; fall back to
      // the projected gradient as the merit function for a full step.
      Eigen::VectorXd trial = box.project(x + dir);
      symmetrize(trial, ties);
      const Eigen::VectorXd gt = obj.gradient(trial);
      const double pg_trial = (trial - box.project(trial - gt)).lpNorm<Eigen::Infinity>();
      if (!(pg_trial < pg_inf)) break;
      x = trial;
      f = obj.value(x);
      g = gt;
      continue;
    }
    g = obj.gradient(x);
  }

  result.support = stats.support;
  result.params = obj.unpack(x);
  result.nll = f;
  result.iterations = iter;
  result.kkt_residual = pg_inf;
  result.converged = pg_inf <= cfg.tol;
  result.at_boundary.resize(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    result.at_boundary[static_cast<std::size_t>(i)] = x[i] <= box.lo[i] || x[i] >= box.hi[i];
  }
  result.existence_ok = existence_check(stats).ok;
  return result;
}

}  // namespace sbm
