#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "gpart/errors.hpp"
#include "gpart/graph.hpp"

namespace gpart {

inline constexpr std::size_t kBruteForceMaxNodes = 20;

struct ExactCut {
  Partition partition;
  double cut_weight = 0.0;
};

/// Exhaustive minimum cut over all bipartitions with |n0 - n1| <=
/// max_imbalance_nodes. Node 0 is pinned to label 0, so each unordered split
/// is visited once; ties resolve to the lexicographically smallest labeling.
inline ExactCut brute_force_min_cut(const Graph& g, std::size_t max_imbalance_nodes) {
  const std::size_t n = g.n();
  if (n > kBruteForceMaxNodes) {
    throw InstanceTooLargeError("brute force is limited to " + std::to_string(kBruteForceMaxNodes) + " nodes, got " +
                                std::to_string(n));
  }
  if (n < 2) throw InvalidArgument("brute force needs at least 2 nodes");

  // Node i (i >= 1) maps to bit n-1-i so that ascending masks are ascending
  // label sequences.
  std::vector<std::uint32_t> bit(n, 0);
  for (std::size_t i = 1; i < n; ++i) bit[i] = std::uint32_t{1} << (n - 1 - i);

  std::vector<std::pair<std::uint32_t, double>> edge_masks;
  edge_masks.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edge_masks.emplace_back(bit[e.u] | bit[e.v], e.w);

  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  bool found = false;
  const std::uint32_t end = std::uint32_t{1} << (n - 1);
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    const auto ones = static_cast<std::size_t>(__builtin_popcount(mask));
    const std::size_t zeros = n - ones;
    const std::size_t diff = ones > zeros ? ones - zeros : zeros - ones;
    if (diff > max_imbalance_nodes) continue;
    double cut = 0.0;
    for (const auto& [m, w] : edge_masks) {
      // cut iff the endpoint labels differ; node 0 has no bit (label 0)
      if (__builtin_parity(mask & m)) cut += w;
    }
    if (cut < best) {
      best = cut;
      best_mask = mask;
      found = true;
    }
  }
  if (!found) throw InvalidArgument("no bipartition satisfies the imbalance bound");

  std::vector<std::uint8_t> labels(n, 0);
  for (std::size_t i = 1; i < n; ++i) labels[i] = (best_mask & bit[i]) ? 1 : 0;
  return {Partition(std::move(labels)), best};
}

}  // namespace gpart
