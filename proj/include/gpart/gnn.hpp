#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gpart/dense.hpp"
#include "gpart/errors.hpp"
#include "gpart/graph.hpp"
#include "gpart/loss.hpp"
#include "gpart/random.hpp"

namespace gpart {

/// Symmetric GCN propagation operator D^-1/2 (A + I) D^-1/2 in CSR form, where
/// A is the 0/1 adjacency and D the degree matrix of A + I.
class NormalizedAdjacency {
 public:
  NormalizedAdjacency() = default;

  explicit NormalizedAdjacency(const Graph& g) : n_(g.n()), offsets_(g.n() + 1, 0) {
    std::vector<double> inv_sqrt_deg(n_);
    for (NodeId v = 0; v < n_; ++v) inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));
    cols_.reserve(n_ + 2 * g.edge_count());
    vals_.reserve(n_ + 2 * g.edge_count());
    for (NodeId v = 0; v < n_; ++v) {
      // self-loop first, then neighbors in adjacency order
      cols_.push_back(v);
      vals_.push_back(inv_sqrt_deg[v] * inv_sqrt_deg[v]);
      for (const Neighbor& nb : g.neighbors(v)) {
        cols_.push_back(nb.node);
        vals_.push_back(inv_sqrt_deg[v] * inv_sqrt_deg[nb.node]);
      }
      offsets_[v + 1] = cols_.size();
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return vals_.size(); }

  /// Dense view, for tests and small graphs.
  Matrix dense() const {
    Matrix out(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) out(i, cols_[k]) += vals_[k];
    }
    return out;
  }

  /// this * x
  Matrix multiply(const Matrix& x) const {
    if (x.rows() != n_) throw InvalidArgument("normalized adjacency: row count mismatch");
    Matrix out(n_, x.cols());
    for (std::size_t i = 0; i < n_; ++i) {
      auto orow = out.row(i);
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        const double a = vals_[k];
        const auto xrow = x.row(cols_[k]);
        for (std::size_t j = 0; j < x.cols(); ++j) orow[j] += a * xrow[j];
      }
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> cols_;
  std::vector<double> vals_;
};

inline NormalizedAdjacency normalized_adjacency(const Graph& g) { return NormalizedAdjacency(g); }

struct ModelConfig {
  std::size_t embed_dim = 16;
  std::size_t hidden_dim = 16;
  std::uint64_t seed = 0;

  void validate() const {
    if (embed_dim < 1 || hidden_dim < 1) throw InvalidArgument("model dimensions must be positive");
  }
};

/// Two-layer GCN with learnable node embeddings:
///   H1 = relu(A X W1 + b1),  logits = A H1 W2 + b2,  p = softmax(logits).
/// The same layout doubles as the gradient container.
struct GnnModel {
  Matrix embeddings;  // n x d0
  Matrix w1;          // d0 x d
  std::vector<double> b1;
  Matrix w2;  // d x 2
  std::vector<double> b2;

  static GnnModel zeros_like(const GnnModel& m) {
    return {Matrix(m.embeddings.rows(), m.embeddings.cols()), Matrix(m.w1.rows(), m.w1.cols()),
            std::vector<double>(m.b1.size(), 0.0), Matrix(m.w2.rows(), m.w2.cols()),
            std::vector<double>(m.b2.size(), 0.0)};
  }

  std::array<std::span<double>, 5> blocks() { return {embeddings.data(), w1.data(), b1, w2.data(), b2}; }
  std::array<std::span<const double>, 5> blocks() const {
    return {embeddings.data(), w1.data(), b1, w2.data(), b2};
  }

  std::size_t parameter_count() const {
    std::size_t total = 0;
    for (auto b : blocks()) total += b.size();
    return total;
  }

  bool all_finite() const {
    for (auto b : blocks()) {
      for (double x : b) {
        if (!std::isfinite(x)) return false;
      }
    }
    return true;
  }

  void check_consistent() const {
    const std::size_t d = w1.cols();
    if (embeddings.cols() != w1.rows() || b1.size() != d || w2.rows() != d || w2.cols() != 2 || b2.size() != 2) {
      throw InvalidArgument("GNN parameter shapes are inconsistent");
    }
  }

  friend bool operator==(const GnnModel&, const GnnModel&) = default;
};

using GnnGradients = GnnModel;

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases. Embeddings
/// act on a one-hot node input, so their fan-in is 1.
inline GnnModel init_model(const Graph& g, const ModelConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  auto fill = [&](Matrix& m, double bound) {
    for (double& x : m.data()) x = bound * (2.0 * uniform01(rng) - 1.0);
  };
  GnnModel m{Matrix(g.n(), cfg.embed_dim), Matrix(cfg.embed_dim, cfg.hidden_dim),
             std::vector<double>(cfg.hidden_dim, 0.0), Matrix(cfg.hidden_dim, 2), std::vector<double>(2, 0.0)};
  fill(m.embeddings, 1.0);
  fill(m.w1, 1.0 / std::sqrt(static_cast<double>(cfg.embed_dim)));
  fill(m.w2, 1.0 / std::sqrt(static_cast<double>(cfg.hidden_dim)));
  return m;
}

/// Intermediate activations kept for the reverse pass.
struct ForwardCache {
  Matrix ax;      // A X
  Matrix pre1;    // A X W1 + b1
  Matrix h1;      // relu(pre1)
  Matrix ah1;     // A H1
  Matrix logits;  // A H1 W2 + b2
  std::vector<double> f;  // softmax probability of class 1
};

namespace detail {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline void add_bias(Matrix& m, std::span<const double> b) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += b[j];
  }
}

}  // namespace detail

inline ForwardCache forward_cached(const GnnModel& model, const NormalizedAdjacency& adj) {
  model.check_consistent();
  if (model.embeddings.rows() != adj.n()) throw InvalidArgument("embedding rows do not match node count");
  ForwardCache c;
  c.ax = adj.multiply(model.embeddings);
  c.pre1 = matmul(c.ax, model.w1);
  detail::add_bias(c.pre1, model.b1);
  c.h1 = c.pre1;
  for (double& x : c.h1.data()) x = x > 0.0 ? x : 0.0;
  c.ah1 = adj.multiply(c.h1);
  c.logits = matmul(c.ah1, model.w2);
  detail::add_bias(c.logits, model.b2);
  c.f.resize(adj.n());
  // two-class softmax: p1 = sigmoid(l1 - l0)
  for (std::size_t i = 0; i < adj.n(); ++i) c.f[i] = detail::sigmoid(c.logits(i, 1) - c.logits(i, 0));
  return c;
}

inline SoftAssignment forward(const GnnModel& model, const NormalizedAdjacency& adj) {
  return SoftAssignment(forward_cached(model, adj).f);
}

/// Reverse pass given d(loss)/d(f_i) for every node.
inline GnnGradients backward(const GnnModel& model, const NormalizedAdjacency& adj, const ForwardCache& cache,
                             std::span<const double> upstream) {
  if (upstream.size() != adj.n()) throw InvalidArgument("upstream gradient length does not match node count");
  model.check_consistent();
  const std::size_t n = adj.n();
  GnnGradients grad = GnnModel::zeros_like(model);

  Matrix d_logits(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cache.f[i];
    const double g = upstream[i] * f * (1.0 - f);
    d_logits(i, 0) = -g;
    d_logits(i, 1) = g;
    grad.b2[0] -= g;
    grad.b2[1] += g;
  }
  grad.w2 = matmul_tn(cache.ah1, d_logits);

  // A is symmetric, so A^T dZ = A dZ
  Matrix d_pre1 = adj.multiply(matmul_nt(d_logits, model.w2));
  for (std::size_t k = 0; k < d_pre1.data().size(); ++k) {
    if (!(cache.pre1.data()[k] > 0.0)) d_pre1.data()[k] = 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = d_pre1.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) grad.b1[j] += r[j];
  }
  grad.w1 = matmul_tn(cache.ax, d_pre1);
  grad.embeddings = adj.multiply(matmul_nt(d_pre1, model.w1));
  return grad;
}

inline GnnGradients backward(const GnnModel& model, const NormalizedAdjacency& adj, std::span<const double> upstream) {
  return backward(model, adj, forward_cached(model, adj), upstream);
}

}  // namespace gpart
