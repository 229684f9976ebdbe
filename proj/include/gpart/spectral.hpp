#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gpart/detail/tridiagonal.hpp"
#include "gpart/errors.hpp"
#include "gpart/graph.hpp"
#include "gpart/random.hpp"

namespace gpart {

enum class SplitRule { sign, median };

inline SplitRule parse_split_rule(std::string_view s) {
  if (s == "sign") return SplitRule::sign;
  if (s == "median") return SplitRule::median;
  throw InvalidArgument("unknown split rule '" + std::string(s) + "' (expected sign or median)");
}

inline std::string_view to_string(SplitRule r) { return r == SplitRule::sign ? "sign" : "median"; }

struct SpectralConfig {
  double tol = 1e-8;
  /// Cap on Laplacian applications; 0 selects 10 n + 1000.
  std::size_t max_iter = 0;
  SplitRule split_rule = SplitRule::sign;

  std::size_t iteration_cap(std::size_t n) const { return max_iter == 0 ? 10 * n + 1000 : max_iter; }
};

struct FiedlerPair {
  double lambda2 = 0.0;
  std::vector<double> vector;  // unit norm, orthogonal to the all-ones vector
  std::size_t iterations = 0;
};

/// y = (D - W) x for the weighted Laplacian of g.
inline void laplacian_apply(const Graph& g, std::span<const double> x, std::span<double> y) {
  for (NodeId v = 0; v < g.n(); ++v) {
    double acc = 0.0;
    for (const Neighbor& nb : g.neighbors(v)) acc += nb.weight * (x[v] - x[nb.node]);
    y[v] = acc;
  }
}

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void remove_mean(std::span<double> x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double& v : x) v -= m;
}

/// Orthogonalize x against the constant vector and every basis vector, twice.
inline void reorthogonalize(std::span<double> x, const std::vector<std::vector<double>>& basis) {
  for (int sweep = 0; sweep < 2; ++sweep) {
    remove_mean(x);
    for (const auto& q : basis) {
      const double c = dot(x, q);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * q[i];
    }
  }
}

inline void normalize_sign(std::vector<double>& v) {
  double big = 0.0;
  for (double x : v) big = std::max(big, std::abs(x));
  for (double x : v) {
    if (std::abs(x) > 1e-10 * big) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

}  // namespace detail

/// Second-smallest Laplacian eigenpair by Lanczos iteration restricted to the
/// complement of the constant vector (full reorthogonalization, explicit
/// restarts from the current Ritz vector). The returned vector satisfies
/// ||L v - lambda2 v|| <= tol and |<v, 1>| <= tol with ||v|| = 1, and its first
/// nonzero entry is positive.
inline FiedlerPair fiedler_pair(const Graph& g, const SpectralConfig& cfg = {}) {
  const std::size_t n = g.n();
  if (n < 2) throw InvalidArgument("Fiedler vector needs at least 2 nodes");
  if (!(cfg.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (!is_connected(g)) throw DisconnectedGraphError("graph is disconnected; lambda2 = 0 and bisection is ill-posed");

  const std::size_t max_apply = cfg.iteration_cap(n);
  const std::size_t dim = n - 1;  // dimension of the complement of 1
  const std::size_t basis_cap = std::min<std::size_t>(dim, 300);
  const std::size_t min_basis = std::min<std::size_t>(dim, 30);
  double scale = 0.0;  // Gershgorin bound on ||L||
  for (NodeId v = 0; v < n; ++v) scale = std::max(scale, 2.0 * g.weighted_degree(v));
  scale = std::max(scale, 1.0);

  Rng rng(0x9e3779b97f4a7c15ULL ^ n);
  auto random_vector = [&] {
    std::vector<double> x(n);
    for (double& v : x) v = uniform01(rng) - 0.5;
    return x;
  };

  std::vector<double> start = random_vector();
  std::vector<double> w(n), lv(n);
  std::size_t applied = 0;

  for (;;) {
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    detail::reorthogonalize(start, basis);
    double nrm = detail::norm(start);
    for (double& x : start) x /= nrm;
    basis.push_back(start);

    std::vector<double> ritz;
    for (;;) {
      const std::vector<double>& q = basis.back();
      laplacian_apply(g, q, w);
      ++applied;
      const double a = detail::dot(w, q);
      alpha.push_back(a);
      detail::reorthogonalize(w, basis);
      double b = detail::norm(w);
      const std::size_t k = basis.size();

      const bool breakdown = b <= 1e-10 * scale;
      const bool full = k == dim;
      const bool check = full || breakdown || k == basis_cap || (k >= min_basis && k % 5 == 0) ||
                         applied >= max_apply;
      if (check) {
        std::vector<double> diag = alpha, vecs;
        detail::tridiagonal_eigen(diag, beta, vecs);
        std::vector<double> y(k);
        for (std::size_t i = 0; i < k; ++i) y[i] = vecs[i * k];
        const double estimate = std::abs(b * y[k - 1]);
        ritz.assign(n, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t r = 0; r < n; ++r) ritz[r] += y[i] * basis[i][r];
        }
        detail::remove_mean(ritz);
        nrm = detail::norm(ritz);
        for (double& x : ritz) x /= nrm;

        if (estimate <= cfg.tol || full || breakdown) {
          laplacian_apply(g, ritz, lv);
          const double lambda = detail::dot(ritz, lv);
          double res2 = 0.0;
          for (std::size_t r = 0; r < n; ++r) res2 += (lv[r] - lambda * ritz[r]) * (lv[r] - lambda * ritz[r]);
          if (std::sqrt(res2) <= cfg.tol && (k >= min_basis || full)) {
            detail::normalize_sign(ritz);
            return {lambda, std::move(ritz), applied};
          }
        }
        if (applied >= max_apply) {
          throw ConvergenceError("Fiedler iteration did not converge within " + std::to_string(max_apply) +
                                 " Laplacian applications");
        }
        if (k == basis_cap || full) break;  // restart from the Ritz vector
      }

      if (breakdown) {
        // invariant subspace found: continue with a fresh direction
        w = random_vector();
        detail::reorthogonalize(w, basis);
        b = 0.0;
        const double wn = detail::norm(w);
        for (double& x : w) x /= wn;
      } else {
        for (double& x : w) x /= b;
      }
      beta.push_back(b);
      basis.push_back(w);
    }
    start = ritz;
  }
}

inline std::vector<double> fiedler_vector(const Graph& g, const SpectralConfig& cfg = {}) {
  return fiedler_pair(g, cfg).vector;
}

/// Splits on the Fiedler vector: sign rule puts v_i > 0 in partition 1;
/// median rule puts the ceil(n/2) largest entries (ties by index) there.
inline Partition split_by_vector(std::span<const double> v, SplitRule rule) {
  std::vector<std::uint8_t> labels(v.size(), 0);
  if (rule == SplitRule::sign) {
    for (std::size_t i = 0; i < v.size(); ++i) labels[i] = v[i] > 0.0 ? 1 : 0;
  } else {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    for (std::size_t k = 0; k < (v.size() + 1) / 2; ++k) labels[order[k]] = 1;
  }
  return Partition(std::move(labels));
}

inline Partition spectral_bisect(const Graph& g, const SpectralConfig& cfg = {}) {
  return split_by_vector(fiedler_vector(g, cfg), cfg.split_rule);
}

}  // namespace gpart
