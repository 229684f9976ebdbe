#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gpart/errors.hpp"
#include "gpart/graph.hpp"
#include "gpart/random.hpp"

namespace gpart {

struct KLConfig {
  std::size_t max_passes = 20;
  std::uint64_t seed = 0;

  void validate() const {
    if (max_passes < 1) throw InvalidArgument("max_passes must be at least 1");
  }
};

struct KLRun {
  Partition initial;
  Partition partition;
  /// Cut weight of the initial partition followed by the cut after each
  /// committed pass.
  std::vector<double> cut_history;
  std::size_t passes = 0;
};

/// Seeded random split with sizes floor(n/2) (label 1) and ceil(n/2) (label 0).
inline Partition random_balanced_partition(std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng(seed);
  shuffle(order.begin(), order.end(), rng);
  std::vector<std::uint8_t> labels(n, 0);
  for (std::size_t k = 0; k < n / 2; ++k) labels[order[k]] = 1;
  return Partition(std::move(labels));
}

namespace detail {

/// One KL pass over `labels`. Returns the best prefix gain; the prefix is
/// applied to `labels` only when that gain is positive.
inline double kl_pass(const Graph& g, std::vector<std::uint8_t>& labels, std::vector<double>& scratch) {
  const std::size_t n = g.n();
  // D_v = external - internal weight
  std::vector<double> d(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    for (const Neighbor& nb : g.neighbors(v)) d[v] += labels[nb.node] != labels[v] ? nb.weight : -nb.weight;
  }
  std::vector<char> locked(n, 0);
  std::vector<NodeId> side_a, side_b;
  for (NodeId v = 0; v < n; ++v) (labels[v] == 0 ? side_a : side_b).push_back(v);
  const std::size_t steps = std::min(side_a.size(), side_b.size());

  std::vector<std::pair<NodeId, NodeId>> swaps;
  std::vector<double> gains;
  swaps.reserve(steps);
  gains.reserve(steps);
  auto by_d = [&](NodeId x, NodeId y) { return d[x] > d[y] || (d[x] == d[y] && x < y); };

  for (std::size_t step = 0; step < steps; ++step) {
    std::erase_if(side_a, [&](NodeId v) { return locked[v]; });
    std::erase_if(side_b, [&](NodeId v) { return locked[v]; });
    std::sort(side_a.begin(), side_a.end(), by_d);
    std::sort(side_b.begin(), side_b.end(), by_d);

    double best = -std::numeric_limits<double>::infinity();
    NodeId best_a = side_a.front(), best_b = side_b.front();
    for (NodeId a : side_a) {
      // gain <= D_a + D_b because edge weights are nonnegative
      if (d[a] + d[side_b.front()] <= best) break;
      for (const Neighbor& nb : g.neighbors(a)) scratch[nb.node] = nb.weight;
      for (NodeId b : side_b) {
        if (d[a] + d[b] <= best) break;
        const double gain = d[a] + d[b] - 2.0 * scratch[b];
        if (gain > best) {
          best = gain;
          best_a = a;
          best_b = b;
        }
      }
      for (const Neighbor& nb : g.neighbors(a)) scratch[nb.node] = 0.0;
    }

    locked[best_a] = locked[best_b] = 1;
    swaps.emplace_back(best_a, best_b);
    gains.push_back(best);
    // D updates as if best_a and best_b had been exchanged
    for (const Neighbor& nb : g.neighbors(best_a)) {
      if (locked[nb.node]) continue;
      d[nb.node] += labels[nb.node] == labels[best_a] ? 2.0 * nb.weight : -2.0 * nb.weight;
    }
    for (const Neighbor& nb : g.neighbors(best_b)) {
      if (locked[nb.node]) continue;
      d[nb.node] += labels[nb.node] == labels[best_b] ? 2.0 * nb.weight : -2.0 * nb.weight;
    }
  }

  double running = 0.0, best_prefix_gain = 0.0;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    running += gains[k];
    if (running > best_prefix_gain) {
      best_prefix_gain = running;
      best_k = k + 1;
    }
  }
  if (best_prefix_gain > 0.0) {
    for (std::size_t k = 0; k < best_k; ++k) {
      std::swap(labels[swaps[k].first], labels[swaps[k].second]);
    }
  }
  return best_prefix_gain;
}

}  // namespace detail

/// Kernighan-Lin from `initial`: repeated passes of locked greedy pair swaps,
/// committing the best cumulative-gain prefix while it improves the cut.
inline KLRun kernighan_lin_from(const Graph& g, Partition initial, const KLConfig& cfg) {
  cfg.validate();
  if (g.n() < 2) throw InvalidArgument("Kernighan-Lin needs at least 2 nodes");
  if (initial.size() != g.n()) throw InvalidArgument("initial partition length does not match node count");

  KLRun run;
  run.initial = initial;
  std::vector<std::uint8_t> labels = initial.labels();
  std::vector<double> scratch(g.n(), 0.0);
  double cut = cut_weight(g, initial);
  run.cut_history.push_back(cut);
  // relative slack keeps float noise from committing a non-improving pass
  const double eps = 1e-12 * std::max(1.0, g.total_weight());
  for (std::size_t pass = 0; pass < cfg.max_passes; ++pass) {
    std::vector<std::uint8_t> trial = labels;
    const double gain = detail::kl_pass(g, trial, scratch);
    ++run.passes;
    if (!(gain > eps)) break;
    const double new_cut = cut_weight(g, Partition(trial));
    if (!(new_cut < cut)) break;
    labels = std::move(trial);
    cut = new_cut;
    run.cut_history.push_back(cut);
  }
  run.partition = Partition(std::move(labels));
  return run;
}

inline KLRun kernighan_lin_run(const Graph& g, const KLConfig& cfg) {
  return kernighan_lin_from(g, random_balanced_partition(g.n(), cfg.seed), cfg);
}

inline Partition kernighan_lin(const Graph& g, const KLConfig& cfg) { return kernighan_lin_run(g, cfg).partition; }

}  // namespace gpart
