#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpart/errors.hpp"
#include "gpart/gnn.hpp"
#include "gpart/graph.hpp"
#include "gpart/loss.hpp"

namespace gpart {

struct AdamHyper {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> first;
  std::vector<double> second;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t size = 0) : first(size, 0.0), second(size, 0.0) {}
};

/// One bias-corrected Adam update of `params` in place.
inline void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
                      const AdamHyper& hyper) {
  if (params.size() != grads.size() || state.first.size() != params.size() || state.second.size() != params.size()) {
    throw InvalidArgument("adam_step: shape mismatch");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(hyper.beta1, t);
  const double c2 = 1.0 - std::pow(hyper.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.first[i] = hyper.beta1 * state.first[i] + (1.0 - hyper.beta1) * g;
    state.second[i] = hyper.beta2 * state.second[i] + (1.0 - hyper.beta2) * g * g;
    const double m_hat = state.first[i] / c1;
    const double v_hat = state.second[i] / c2;
    params[i] -= hyper.learning_rate * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
  }
}

/// Adam over every parameter block of a model, sharing one step counter.
inline void adam_step(GnnModel& model, const GnnGradients& grads, AdamState& state, const AdamHyper& hyper) {
  const std::size_t total = model.parameter_count();
  if (grads.parameter_count() != total || state.first.size() != total) {
    throw InvalidArgument("adam_step: shape mismatch");
  }
  // flatten, update, scatter back
  std::vector<double> p, g;
  p.reserve(total);
  g.reserve(total);
  for (auto b : model.blocks()) p.insert(p.end(), b.begin(), b.end());
  for (auto b : grads.blocks()) g.insert(g.end(), b.begin(), b.end());
  adam_step(std::span<double>(p), std::span<const double>(g), state, hyper);
  std::size_t off = 0;
  for (auto b : model.blocks()) {
    std::copy_n(p.begin() + static_cast<std::ptrdiff_t>(off), b.size(), b.begin());
    off += b.size();
  }
}

struct TrainConfig {
  AdamHyper adam;
  std::size_t epochs = 500;
  std::size_t patience = 100;

  void validate() const {
    if (!(adam.learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
    if (epochs < 1) throw InvalidArgument("epochs must be at least 1");
  }
};

struct TrainReport {
  std::vector<LossBreakdown> loss_curve;
  std::size_t best_epoch = 0;
  double best_loss = 0.0;
  double wall_time_seconds = 0.0;
};

struct TrainResult {
  SoftAssignment assignment;
  TrainReport report;
};

namespace detail {

inline void check_finite(std::span<const double> f, std::size_t epoch) {
  for (double x : f) {
    if (!std::isfinite(x)) throw DivergenceError("non-finite network output at epoch " + std::to_string(epoch));
  }
}

inline void check_finite(const LossBreakdown& loss, std::size_t epoch) {
  if (!std::isfinite(loss.total)) {
    throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) + " (cuts=" +
                          std::to_string(loss.l_cuts) + ", balance=" + std::to_string(loss.l_balance) +
                          ", centrality=" + std::to_string(loss.l_centrality) + ")");
  }
}

}  // namespace detail

/// Per-instance unsupervised training. Returns the assignment of the epoch
/// with the lowest total loss; stops early after `patience` epochs without
/// improvement.
inline TrainResult train(const Graph& g, const ModelConfig& mcfg, const LossConfig& lcfg, const TrainConfig& tcfg) {
  mcfg.validate();
  lcfg.validate();
  tcfg.validate();
  const auto start = std::chrono::steady_clock::now();

  const NormalizedAdjacency adj(g);
  GnnModel model = init_model(g, mcfg);
  AdamState state(model.parameter_count());

  TrainResult result;
  result.report.loss_curve.reserve(tcfg.epochs);
  std::vector<double> upstream;
  for (std::size_t epoch = 0; epoch < tcfg.epochs; ++epoch) {
    const ForwardCache cache = forward_cached(model, adj);
    detail::check_finite(cache.f, epoch);
    SoftAssignment a(cache.f);
    const LossBreakdown loss = loss_and_grad(g, a, lcfg, upstream);
    detail::check_finite(loss, epoch);
    result.report.loss_curve.push_back(loss);
    if (epoch == 0 || loss.total < result.report.best_loss) {
      result.report.best_loss = loss.total;
      result.report.best_epoch = epoch;
      result.assignment = std::move(a);
    } else if (tcfg.patience > 0 && epoch - result.report.best_epoch >= tcfg.patience) {
      break;
    }
    if (epoch + 1 == tcfg.epochs) break;
    const GnnGradients grads = backward(model, adj, cache, upstream);
    adam_step(model, grads, state, tcfg.adam);
  }

  result.report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

enum class Decoder { argmax, balanced };

inline Decoder parse_decoder(std::string_view s) {
  if (s == "argmax") return Decoder::argmax;
  if (s == "balanced") return Decoder::balanced;
  throw InvalidArgument("unknown decoder '" + std::string(s) + "' (expected argmax or balanced)");
}

inline std::string_view to_string(Decoder d) { return d == Decoder::argmax ? "argmax" : "balanced"; }

/// label 1 iff f_i > 0.5; exact ties go to 0.
inline Partition decode_argmax(const SoftAssignment& a) {
  std::vector<std::uint8_t> labels(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) labels[i] = a.f(i) > 0.5 ? 1 : 0;
  return Partition(std::move(labels));
}

/// The ceil(n/2) nodes with the largest f (ties by index) get label 1.
inline Partition decode_balanced(const SoftAssignment& a) {
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a.f(x) > a.f(y); });
  std::vector<std::uint8_t> labels(a.size(), 0);
  const std::size_t top = (a.size() + 1) / 2;
  for (std::size_t k = 0; k < top; ++k) labels[order[k]] = 1;
  return Partition(std::move(labels));
}

inline Partition decode(const SoftAssignment& a, Decoder d) {
  return d == Decoder::argmax ? decode_argmax(a) : decode_balanced(a);
}

}  // namespace gpart
