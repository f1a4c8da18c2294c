#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "sbm/graph.hpp"
#include "sbm/likelihood.hpp"

namespace sbm {
namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool bernoulli(std::mt19937_64& rng, double p) { return uniform01(rng) < p; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Index k of the row-major upper triangle of an r x r matrix -> (a, b), a < b.
std::pair<std::uint64_t, std::uint64_t> unrank_pair(std::uint64_t k, std::uint64_t r) {
  auto offset = [r](std::uint64_t a) { return a * r - a * (a + 1) / 2; };
  const double rr = 2.0 * static_cast<double>(r) - 1.0;
  const double disc = rr * rr - 8.0 * static_cast<double>(k);
  auto a = static_cast<std::uint64_t>(std::max(0.0, std::floor((rr - std::sqrt(std::max(disc, 0.0))) / 2.0)));
  while (a > 0 && offset(a) > k) --a;
  while (a + 1 < r && offset(a + 1) <= k) ++a;
  return {a, a + 1 + (k - offset(a))};
}

// Floyd's algorithm: `count` distinct values from [0, total).
std::vector<std::uint64_t> choose_distinct(std::uint64_t total, std::uint64_t count,
                                           std::mt19937_64& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t j = total - count; j < total; ++j) {
    const auto t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
    const auto pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    out.push_back(pick);
  }
  return out;
}

void sample_outside_block(const std::vector<NodeId>& outside, double p, std::mt19937_64& rng,
                          SamplingMode mode, std::vector<Edge>& edges) {
  const std::uint64_t r = outside.size();
  const std::uint64_t pairs = r * (r - (r > 0 ? 1 : 0)) / 2;
  if (mode == SamplingMode::per_pair || pairs <= kGroupedSamplingThreshold) {
    for (std::size_t a = 0; a < outside.size(); ++a) {
      for (std::size_t b = a + 1; b < outside.size(); ++b) {
        if (bernoulli(rng, p)) edges.push_back({outside[a], outside[b]});
      }
    }
    return;
  }

  const auto count = std::binomial_distribution<std::uint64_t>(pairs, p)(rng);
  // Choosing the absent pairs is cheaper when the block is mostly present.
  const bool complement = count > pairs / 2;
  auto picked = choose_distinct(pairs, complement ? pairs - count : count, rng);
  if (!complement) {
    for (auto k : picked) {
      auto [a, b] = unrank_pair(k, r);
      edges.push_back({outside[a], outside[b]});
    }
    return;
  }
  std::sort(picked.begin(), picked.end());
  auto next = picked.begin();
  for (std::uint64_t k = 0; k < pairs; ++k) {
    if (next != picked.end() && *next == k) {
      ++next;
      continue;
    }
    auto [a, b] = unrank_pair(k, r);
    edges.push_back({outside[a], outside[b]});
  }
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Graph sample_sbm(const SbmParams& params, std::uint64_t seed, SamplingMode mode) {
  std::mt19937_64 rng(seed);
  return sample_sbm(params, rng, mode);
}

Graph sample_sbm(const SbmParams& params, std::mt19937_64& rng, SamplingMode mode) {
  params.validate();
  const std::size_t n = params.n();
  const auto& support = params.support;

  std::vector<char> in_support(n, 0);
  for (auto i : support) in_support[i] = 1;
  std::vector<NodeId> outside;
  outside.reserve(n - support.size());
  for (NodeId i = 0; i < n; ++i) {
    if (!in_support[i]) outside.push_back(i);
  }

  std::vector<Edge> edges;
  for (std::size_t a = 0; a < support.size(); ++a) {
    const auto i = support[a];
    for (std::size_t b = a + 1; b < support.size(); ++b) {
      const auto j = support[b];
      if (bernoulli(rng, logistic(params.mu + params.beta[i] + params.beta[j]))) {
        edges.push_back({i, j});
      }
    }
    const double p = logistic(params.mu + params.beta[i]);
    for (auto j : outside) {
      if (bernoulli(rng, p)) edges.push_back({i, j});
    }
  }
  sample_outside_block(outside, logistic(params.mu), rng, mode, edges);
  return Graph(n, std::move(edges));
}

}  // namespace sbm
