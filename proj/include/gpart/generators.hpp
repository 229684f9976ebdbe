#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gpart/errors.hpp"
#include "gpart/graph.hpp"
#include "gpart/random.hpp"

namespace gpart {

/// G(n, p): every unordered pair is an edge independently with probability p.
inline Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("generate_er needs n >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (uniform01(rng) < p) edges.push_back({u, v, 1.0});
    }
  }
  return Graph(n, std::move(edges));
}

/// Two equal communities {0..n/2-1} and {n/2..n-1}; returns the graph and the
/// planted labeling (community index as label).
inline std::pair<Graph, Partition> generate_planted(std::size_t n, double p_in, double p_out, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("generate_planted needs an even n >= 2");
  if (!(p_out >= 0.0 && p_out <= p_in && p_in <= 1.0)) {
    throw InvalidArgument("generate_planted needs 0 <= p_out <= p_in <= 1");
  }
  const std::size_t half = n / 2;
  std::vector<std::uint8_t> labels(n, 0);
  for (std::size_t v = half; v < n; ++v) labels[v] = 1;

  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double p = labels[u] == labels[v] ? p_in : p_out;
      if (uniform01(rng) < p) edges.push_back({u, v, 1.0});
    }
  }
  return {Graph(n, std::move(edges)), Partition(std::move(labels))};
}

/// Two cliques K_{n/2} on {0..n/2-1} and {n/2..n-1}. With `bridged`, a single
/// edge (n/2-1, n/2) joins them. The returned partition separates the cliques.
inline std::pair<Graph, Partition> generate_twin_cliques(std::size_t n, bool bridged = true) {
  if (n < 4 || n % 2 != 0) throw InvalidArgument("twin cliques need an even n >= 4");
  const auto half = static_cast<NodeId>(n / 2);
  std::vector<Edge> edges;
  for (NodeId base : {NodeId{0}, half}) {
    for (NodeId u = 0; u < half; ++u) {
      for (NodeId v = u + 1; v < half; ++v) edges.push_back({base + u, base + v, 1.0});
    }
  }
  if (bridged) edges.push_back({half - 1, half, 1.0});
  std::vector<std::uint8_t> labels(n, 0);
  for (std::size_t v = half; v < n; ++v) labels[v] = 1;
  return {Graph(n, std::move(edges)), Partition(std::move(labels))};
}

}  // namespace gpart
