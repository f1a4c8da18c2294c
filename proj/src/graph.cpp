#include "sbm/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "sbm/errors.hpp"

namespace sbm {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ == 0) throw DataError("graph must have at least one node");
  for (auto& e : edges_) {
    if (e.u == e.v) {
      throw DataError("self loop at node " + std::to_string(e.u));
    }
    if (e.u >= n_ || e.v >= n_) {
      std::ostringstream msg;
      msg << "edge (" << e.u << ", " << e.v << ") references a node >= n=" << n_;
      throw DataError(msg.str());
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    std::ostringstream msg;
    msg << "duplicate edge (" << dup->u << ", " << dup->v << ")";
    throw DataError(msg.str());
  }

  degrees_.assign(n_, 0);
  for (const auto& e : edges_) {
    ++degrees_[e.u];
    ++degrees_[e.v];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    offsets_[i + 1] = offsets_[i] + static_cast<std::size_t>(degrees_[i]);
  }
  adjacency_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }
}

std::span<const NodeId> Graph::neighbors(NodeId i) const {
  return std::span<const NodeId>(adjacency_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= n_ || v >= n_) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::relabeled(std::span<const NodeId> perm) const {
  if (perm.size() != n_) throw std::invalid_argument("permutation size mismatch");
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({perm[e.u], perm[e.v]});
  return Graph(n_, std::move(out));
}

Support DegreePartition::top_groups(std::size_t k) const {
  Support s;
  for (std::size_t g = 0; g < k && g < groups.size(); ++g) {
    s.insert(s.end(), groups[g].begin(), groups[g].end());
  }
  std::sort(s.begin(), s.end());
  return s;
}

DegreePartition degree_partition(const Graph& g) {
  std::map<std::int64_t, std::vector<NodeId>, std::greater<>> by_degree;
  for (NodeId i = 0; i < g.n(); ++i) by_degree[g.degree(i)].push_back(i);

  DegreePartition p;
  for (auto& [d, nodes] : by_degree) {
    p.distinct.push_back(d);
    p.sizes.push_back(nodes.size());
    p.groups.push_back(std::move(nodes));
  }
  std::size_t total = 0;
  for (std::size_t k = 0; k + 1 < p.sizes.size(); ++k) {
    total += p.sizes[k];
    p.cumulative.push_back(total);
  }
  return p;
}

}  // namespace sbm
