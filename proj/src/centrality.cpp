#include <cmath>
#include <numeric>
#include <sstream>

#include "sbm/errors.hpp"
#include "sbm/graph.hpp"

namespace sbm {
namespace {

std::vector<std::size_t> component_ids(const Graph& g, std::size_t& count) {
  std::vector<std::size_t> comp(g.n(), g.n());
  std::vector<NodeId> stack;
  count = 0;
  for (NodeId s = 0; s < g.n(); ++s) {
    if (comp[s] != g.n()) continue;
    comp[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto w : g.neighbors(v)) {
        if (comp[w] == g.n()) {
          comp[w] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  return comp;
}

void multiply(const Graph& g, const std::vector<double>& x, std::vector<double>& y) {
  for (NodeId i = 0; i < g.n(); ++i) {
    double acc = 0.0;
    for (auto j : g.neighbors(i)) acc += x[j];
    y[i] = acc;
  }
}

double norm2(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

EigenvectorResult eigenvector_centrality(const Graph& g, double tol, int max_iter) {
  if (g.d_plus() == 0) throw DataError("eigenvector centrality needs at least one edge");
  const std::size_t n = g.n();

  // Power iteration on A + I: same eigenvectors as A, but the shift keeps the
  // top eigenvalue strictly dominant on bipartite graphs.
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> ax(n);
  EigenvectorResult result;
  for (int it = 1;; ++it) {
    multiply(g, x, ax);
    const double lambda = std::inner_product(x.begin(), x.end(), ax.begin(), 0.0);
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) r2 += (ax[i] - lambda * x[i]) * (ax[i] - lambda * x[i]);
    result.eigenvalue = lambda;
    result.residual = std::sqrt(r2);
    result.iterations = it;
    if (result.residual <= tol) break;
    if (it >= max_iter) {
      std::ostringstream msg;
      msg << "power iteration did not converge in " << max_iter
          << " iterations (residual " << result.residual << ")";
      throw ConvergenceError(msg.str(), result.residual);
    }
    for (std::size_t i = 0; i < n; ++i) ax[i] += x[i];
    const double scale = 1.0 / norm2(ax);
    for (std::size_t i = 0; i < n; ++i) x[i] = ax[i] * scale;
  }

  std::size_t ncomp = 0;
  const auto comp = component_ids(g, ncomp);
  if (ncomp > 1) {
    std::vector<double> mass(ncomp, 0.0), rayleigh(ncomp, 0.0);
    for (NodeId i = 0; i < n; ++i) {
      mass[comp[i]] += x[i] * x[i];
      rayleigh[comp[i]] += x[i] * ax[i];
    }
    int sharing = 0;
    for (std::size_t c = 0; c < ncomp; ++c) {
      if (mass[c] > 1e-12 && std::abs(rayleigh[c] / mass[c] - result.eigenvalue) < 1e-6) {
        ++sharing;
      }
    }
    result.unique = sharing <= 1;
  }

  const double target = static_cast<double>(n);
  result.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.x[i] = std::max(0.0, x[i]) * target;
  const double actual = norm2(result.x);
  for (auto& v : result.x) v *= target / actual;
  return result;
}

}  // namespace sbm
