#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gpart/errors.hpp"

namespace gpart {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  double weight;
};

/// Immutable weighted undirected graph. Edges are stored with u < v in
/// lexicographic order; the adjacency is a CSR structure holding every edge
/// in both directions.
class Graph {
 public:
  Graph() = default;

  /// Validates and normalizes `edges`. `line_of` optionally maps each edge to
  /// the input line it came from so that errors can point at it.
  explicit Graph(std::size_t n, std::vector<Edge> edges,
                 std::span<const std::size_t> line_of = {})
      : n_(n) {
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto line = [&](std::size_t i) { return line_of.empty() ? std::size_t{0} : line_of[i]; };

    for (std::size_t i = 0; i < edges.size(); ++i) {
      Edge& e = edges[i];
      if (e.u >= n || e.v >= n) {
        throw IndexRangeError(line(i), "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                           ") out of range for " + std::to_string(n) + " nodes");
      }
      if (e.u == e.v) {
        throw SelfLoopError(line(i), "self-loop on node " + std::to_string(e.u));
      }
      if (!(e.w >= 0.0) || !std::isfinite(e.w)) {
        throw ParseError(line(i), "edge weight must be finite and nonnegative");
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }

    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(edges[a].u, edges[a].v) < std::pair(edges[b].u, edges[b].v);
    });
    edges_.reserve(edges.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const Edge& e = edges[order[k]];
      if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
        throw DuplicateEdgeError(line(order[k]), "duplicate edge (" + std::to_string(e.u) + ", " +
                                                     std::to_string(e.v) + ")");
      }
      edges_.push_back(e);
      total_weight_ += e.w;
    }

    offsets_.assign(n_ + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
      adjacency_[cursor[e.u]++] = {e.v, e.w};
      adjacency_[cursor[e.v]++] = {e.u, e.w};
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  double total_weight() const noexcept { return total_weight_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const Neighbor> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  double weighted_degree(NodeId v) const {
    double d = 0.0;
    for (const Neighbor& nb : neighbors(v)) d += nb.weight;
    return d;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  double total_weight_ = 0.0;
};

/// Hard bisection: label 1 marks membership in S.
class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
    for (std::uint8_t l : labels_) {
      if (l > 1) throw InvalidArgument("partition labels must be 0 or 1");
    }
  }

  static Partition all_zero(std::size_t n) { return Partition(std::vector<std::uint8_t>(n, 0)); }

  std::size_t size() const noexcept { return labels_.size(); }
  std::uint8_t operator[](std::size_t i) const { return labels_[i]; }
  void set(std::size_t i, std::uint8_t label) {
    if (label > 1) throw InvalidArgument("partition labels must be 0 or 1");
    labels_[i] = label;
  }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

  std::size_t count(std::uint8_t label) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
  }

  /// |n0 - n1|
  std::size_t imbalance_nodes() const {
    const std::size_t ones = count(1);
    const std::size_t zeros = size() - ones;
    return ones > zeros ? ones - zeros : zeros - ones;
  }

  Partition flipped() const {
    std::vector<std::uint8_t> out(labels_.size());
    std::transform(labels_.begin(), labels_.end(), out.begin(), [](std::uint8_t l) -> std::uint8_t { return 1 - l; });
    return Partition(std::move(out));
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::uint8_t> labels_;
};

struct Metrics {
  double cut_percent = 0.0;
  double imbalance_percent = 0.0;
  double cut_weight = 0.0;
};

/// Sum of weights of edges whose endpoints carry different labels.
inline double cut_weight(const Graph& g, const Partition& part) {
  if (part.size() != g.n()) throw InvalidArgument("partition length does not match node count");
  double w = 0.0;
  for (const Edge& e : g.edges()) {
    if (part[e.u] != part[e.v]) w += e.w;
  }
  return w;
}

inline Metrics cut_metrics(const Graph& g, const Partition& part) {
  if (part.size() != g.n()) throw InvalidArgument("partition length does not match node count");
  if (g.edge_count() == 0) throw InvalidArgument("cut metrics need at least one edge");
  std::size_t cut_edges = 0;
  double w = 0.0;
  for (const Edge& e : g.edges()) {
    if (part[e.u] != part[e.v]) {
      ++cut_edges;
      w += e.w;
    }
  }
  Metrics m;
  m.cut_percent = 100.0 * static_cast<double>(cut_edges) / static_cast<double>(g.edge_count());
  m.imbalance_percent = 100.0 * static_cast<double>(part.imbalance_nodes()) / static_cast<double>(g.n());
  m.cut_weight = w;
  return m;
}

/// Connectivity over edges of positive weight. Graphs with fewer than two
/// nodes count as connected.
inline bool is_connected(const Graph& g) {
  if (g.n() <= 1) return true;
  std::vector<char> seen(g.n(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : g.neighbors(v)) {
      if (nb.weight > 0.0 && !seen[nb.node]) {
        seen[nb.node] = 1;
        ++reached;
        stack.push_back(nb.node);
      }
    }
  }
  return reached == g.n();
}

/// Relabels node v as perm[v].
inline Graph permute(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.n()) throw InvalidArgument("permutation length does not match node count");
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edges.push_back({perm[e.u], perm[e.v], e.w});
  return Graph(g.n(), std::move(edges));
}

inline Partition permute(const Partition& part, std::span<const NodeId> perm) {
  if (perm.size() != part.size()) throw InvalidArgument("permutation length does not match partition length");
  std::vector<std::uint8_t> out(part.size());
  for (std::size_t v = 0; v < part.size(); ++v) out[perm[v]] = part[v];
  return Partition(std::move(out));
}

}  // namespace gpart
