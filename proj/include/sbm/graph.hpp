#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sbm/params.hpp"
#include "sbm/types.hpp"

namespace sbm {

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on nodes 0..n-1. Immutable once built.
class Graph {
 public:
  /// Throws DataError on self loops, duplicate edges, or ids >= n.
  /// Edges are canonicalized to u < v and sorted.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const { return n_; }
  std::size_t d_plus() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const std::int64_t> degrees() const { return degrees_; }
  std::int64_t degree(NodeId i) const { return degrees_[i]; }
  std::span<const NodeId> neighbors(NodeId i) const;
  bool has_edge(NodeId u, NodeId v) const;

  /// Graph with node i renamed to perm[i].
  Graph relabeled(std::span<const NodeId> perm) const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> degrees_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
};

/// Nodes grouped by distinct degree d_(1) > ... > d_(m).
struct DegreePartition {
  std::vector<std::int64_t> distinct;
  std::vector<std::vector<NodeId>> groups;
  std::vector<std::size_t> sizes;
  /// s_1, s_1 + s_2, ..., s_1 + ... + s_{m-1}; the sparsity levels at which
  /// the l0-constrained fit is unique.
  std::vector<std::size_t> cumulative;

  /// Union of the first k groups, sorted.
  Support top_groups(std::size_t k) const;
};

DegreePartition degree_partition(const Graph& g);

/// Edge-list text format: optional header "n=<int>", '#' comments, one
/// "<u> <v>" pair per line. Errors carry the offending line number.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(const std::string& text);
void write_edge_list(const Graph& g, std::ostream& out);

/// One external label per line; line k labels node k.
std::vector<std::string> load_labels(const std::filesystem::path& path);

enum class SamplingMode {
  automatic,  // grouped binomial draw for large homogeneous blocks
  per_pair,
};

/// Pairs outside the support above this count are sampled as a binomial total
/// followed by a uniform choice of distinct pairs.
inline constexpr std::size_t kGroupedSamplingThreshold = 10'000;

Graph sample_sbm(const SbmParams& params, std::uint64_t seed,
                 SamplingMode mode = SamplingMode::automatic);
Graph sample_sbm(const SbmParams& params, std::mt19937_64& rng,
                 SamplingMode mode = SamplingMode::automatic);

/// Seed of an independent stream for replication `index` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

struct EigenvectorResult {
  std::vector<double> x;  // nonnegative, Euclidean norm n
  double eigenvalue = 0.0;
  double residual = 0.0;  // ||A x - lambda x|| / ||x||
  int iterations = 0;
  /// False when several connected components share the top eigenvalue, in
  /// which case the returned vector is one element of a larger eigenspace.
  bool unique = true;
};

/// Principal eigenvector of the adjacency matrix by power iteration on A + I
/// from the uniform vector. Throws DataError without edges and
/// ConvergenceError after `max_iter` iterations.
EigenvectorResult eigenvector_centrality(const Graph& g, double tol = 1e-10,
                                         int max_iter = 100'000);

}  // namespace sbm
