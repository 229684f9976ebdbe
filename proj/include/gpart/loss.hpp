#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gpart/errors.hpp"
#include "gpart/graph.hpp"
#include "gpart/random.hpp"

namespace gpart {

/// Independent per-node distribution over the two sides. Stores f_i, the
/// probability that node i lands in partition 1; p_i = (1 - f_i, f_i).
class SoftAssignment {
 public:
  SoftAssignment() = default;

  explicit SoftAssignment(std::vector<double> f) : f_(std::move(f)) {
    for (double x : f_) {
      if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("soft assignment entries must lie in [0, 1]");
    }
  }

  static SoftAssignment from_probabilities(std::span<const std::array<double, 2>> p) {
    std::vector<double> f;
    f.reserve(p.size());
    for (const auto& row : p) {
      if (std::abs(row[0] + row[1] - 1.0) > 1e-9) throw InvalidArgument("probability pair does not sum to 1");
      f.push_back(row[1]);
    }
    return SoftAssignment(std::move(f));
  }

  static SoftAssignment hardened(const Partition& part) {
    std::vector<double> f(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) f[i] = part[i];
    return SoftAssignment(std::move(f));
  }

  std::size_t size() const noexcept { return f_.size(); }
  double f(std::size_t i) const { return f_[i]; }
  std::array<double, 2> p(std::size_t i) const { return {1.0 - f_[i], f_[i]}; }
  std::span<const double> values() const noexcept { return f_; }

  SoftAssignment flipped() const {
    std::vector<double> out(f_.size());
    for (std::size_t i = 0; i < f_.size(); ++i) out[i] = 1.0 - f_[i];
    return SoftAssignment(std::move(out));
  }

  friend bool operator==(const SoftAssignment&, const SoftAssignment&) = default;

 private:
  std::vector<double> f_;
};

enum class LossMode {
  literal,    ///< uncorrected formulas, kept for comparison
  corrected,  ///< sign/centering fixes; the default
};

inline LossMode parse_loss_mode(std::string_view s) {
  if (s == "literal") return LossMode::literal;
  if (s == "corrected") return LossMode::corrected;
  throw InvalidArgument("unknown loss mode '" + std::string(s) + "' (expected literal or corrected)");
}

inline std::string_view to_string(LossMode m) { return m == LossMode::literal ? "literal" : "corrected"; }

struct LossConfig {
  double alpha = 2.0;
  double xi = 0.5;
  double z = 0.0;
  LossMode mode = LossMode::corrected;
  double lambda_cut = 1.0;
  double lambda_balance = 1.0;
  double lambda_centrality = 1.0;

  void validate() const {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (!(xi > 0.0)) throw InvalidArgument("xi must be positive");
    if (!(z >= 0.0 && z < 1.0)) throw InvalidArgument("z must lie in [0, 1)");
    if (!(lambda_cut >= 0.0 && lambda_balance >= 0.0 && lambda_centrality >= 0.0)) {
      throw InvalidArgument("term weights must be nonnegative");
    }
  }
};

struct LossBreakdown {
  double l_cuts = 0.0;
  double l_balance = 0.0;
  double l_centrality = 0.0;
  double total = 0.0;
};

/// Expected class index; for two classes this is p[1].
inline double soft_argmax(const std::array<double, 2>& p) {
  if (std::abs(p[0] + p[1] - 1.0) > 1e-9 || p[0] < 0.0 || p[1] < 0.0) {
    throw InvalidArgument("soft_argmax expects a normalized probability pair");
  }
  return 0.0 * p[0] + 1.0 * p[1];
}

namespace detail {

inline void check_length(const Graph& g, const SoftAssignment& a) {
  if (a.size() != g.n()) throw InvalidArgument("soft assignment length does not match node count");
}

/// Cut-term squashing s(m) and ds/dm.
///   literal:   s = tanh(a m) - 1/2
///   corrected: s = tanh(a (m - 1/2)) / (2 tanh(a/2)), odd about m = 1/2 with s(0) = -1/2, s(1) = 1/2
struct CutSquash {
  double alpha;
  LossMode mode;
  double scale;

  CutSquash(double a, LossMode m) : alpha(a), mode(m), scale(0.5 / std::tanh(0.5 * a)) {}

  double value(double m) const {
    return mode == LossMode::literal ? std::tanh(alpha * m) - 0.5 : scale * std::tanh(alpha * (m - 0.5));
  }
  double slope(double m) const {
    if (mode == LossMode::literal) {
      const double t = std::tanh(alpha * m);
      return alpha * (1.0 - t * t);
    }
    const double t = std::tanh(alpha * (m - 0.5));
    return scale * alpha * (1.0 - t * t);
  }
};

inline double mean(std::span<const double> f) {
  double s = 0.0;
  for (double x : f) s += x;
  return f.empty() ? 0.0 : s / static_cast<double>(f.size());
}

inline double centrality_offset(LossMode mode) { return mode == LossMode::literal ? 0.0 : 1.0; }

/// Shared evaluation; `grad` (if non-empty) receives d(total)/d(f_i).
inline LossBreakdown evaluate(const Graph& g, const SoftAssignment& a, const LossConfig& cfg, std::span<double> grad) {
  check_length(g, a);
  cfg.validate();
  const bool want_grad = !grad.empty();
  if (want_grad) {
    if (grad.size() != g.n()) throw InvalidArgument("gradient buffer length does not match node count");
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  const CutSquash squash(cfg.alpha, cfg.mode);
  const bool literal = cfg.mode == LossMode::literal;
  const double inv_two_xi2 = 1.0 / (2.0 * cfg.xi * cfg.xi);
  const double offset = centrality_offset(cfg.mode);

  std::vector<double> s(g.n()), ds;
  for (std::size_t i = 0; i < g.n(); ++i) s[i] = squash.value(a.f(i));
  if (want_grad) {
    ds.resize(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) ds[i] = squash.slope(a.f(i));
  }

  // literal balance is a per-endpoint penalty, summed once per incident edge
  std::vector<double> bal_t, bal_dt;
  if (literal) {
    bal_t.resize(g.n());
    if (want_grad) bal_dt.resize(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) {
      const double t = std::tanh(cfg.alpha * (a.f(i) - 0.5));
      bal_t[i] = t * t;
      if (want_grad) bal_dt[i] = 2.0 * t * cfg.alpha * (1.0 - t * t);
    }
  }

  LossBreakdown out;
  for (const Edge& e : g.edges()) {
    const double su = s[e.u], sv = s[e.v];
    const double sign = literal ? 1.0 : -1.0;
    out.l_cuts += e.w * (literal ? su * sv : 0.25 - su * sv);

    if (literal) out.l_balance += bal_t[e.u] + bal_t[e.v];

    const double c = a.f(e.u) + a.f(e.v) - offset;
    const double gauss = std::exp(-c * c * inv_two_xi2);
    out.l_centrality += gauss;

    if (want_grad) {
      grad[e.u] += cfg.lambda_cut * sign * e.w * sv * ds[e.u];
      grad[e.v] += cfg.lambda_cut * sign * e.w * su * ds[e.v];
      if (literal) {
        grad[e.u] += cfg.lambda_balance * bal_dt[e.u];
        grad[e.v] += cfg.lambda_balance * bal_dt[e.v];
      }
      const double dc = -gauss * c * 2.0 * inv_two_xi2;
      grad[e.u] += cfg.lambda_centrality * dc;
      grad[e.v] += cfg.lambda_centrality * dc;
    }
  }

  if (!literal && g.n() > 0) {
    // the per-endpoint penalty of the literal form with every f replaced by
    // the mean f: 2|E| tanh(alpha (mean - 1/2))^2
    const double n = static_cast<double>(g.n());
    const double scale = 2.0 * static_cast<double>(g.edge_count());
    const double t = std::tanh(cfg.alpha * (mean(a.values()) - 0.5));
    out.l_balance = scale * t * t;
    if (want_grad) {
      const double d = cfg.lambda_balance * scale * 2.0 * t * cfg.alpha * (1.0 - t * t) / n;
      for (double& gi : grad) gi += d;
    }
  }

  out.total = cfg.lambda_cut * out.l_cuts + cfg.lambda_balance * out.l_balance +
              cfg.lambda_centrality * out.l_centrality;
  return out;
}

}  // namespace detail

inline double loss_cuts(const Graph& g, const SoftAssignment& a, const LossConfig& cfg) {
  return detail::evaluate(g, a, cfg, {}).l_cuts;
}

inline double loss_balance(const Graph& g, const SoftAssignment& a, const LossConfig& cfg) {
  return detail::evaluate(g, a, cfg, {}).l_balance;
}

inline double loss_centrality(const Graph& g, const SoftAssignment& a, const LossConfig& cfg) {
  return detail::evaluate(g, a, cfg, {}).l_centrality;
}

inline LossBreakdown total_loss(const Graph& g, const SoftAssignment& a, const LossConfig& cfg) {
  return detail::evaluate(g, a, cfg, {});
}

/// d(total)/d(f_i), with m_i = f_i.
inline std::vector<double> grad_total_loss(const Graph& g, const SoftAssignment& a, const LossConfig& cfg) {
  std::vector<double> grad(g.n());
  detail::evaluate(g, a, cfg, grad);
  return grad;
}

/// Loss and gradient in one pass.
inline LossBreakdown loss_and_grad(const Graph& g, const SoftAssignment& a, const LossConfig& cfg,
                                   std::vector<double>& grad) {
  grad.assign(g.n(), 0.0);
  return detail::evaluate(g, a, cfg, grad);
}

/// Exact E[cut weight] when labels are independent Bernoulli(f_i).
inline double expected_cut_cost(const Graph& g, const SoftAssignment& a) {
  detail::check_length(g, a);
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const double fu = a.f(e.u), fv = a.f(e.v);
    total += e.w * (fu * (1.0 - fv) + (1.0 - fu) * fv);
  }
  return total;
}

/// Markov-inequality threshold E / (1 - z).
inline double markov_bound(double expected_cost, double z) {
  if (!(z >= 0.0 && z < 1.0)) throw InvalidArgument("z must lie in [0, 1)");
  if (!(expected_cost >= 0.0)) throw InvalidArgument("expected cost must be nonnegative");
  return expected_cost / (1.0 - z);
}

/// Fraction of `samples` partitions drawn from `a` whose cut weight does not
/// exceed markov_bound(expected_cut_cost(g, a), z).
inline double check_markov_guarantee(const Graph& g, const SoftAssignment& a, double z, std::size_t samples,
                                     std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("need at least one sample");
  const double bound = markov_bound(expected_cut_cost(g, a), z);
  Rng rng(seed);
  std::vector<std::uint8_t> labels(g.n());
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < g.n(); ++i) labels[i] = uniform01(rng) < a.f(i) ? 1 : 0;
    double cut = 0.0;
    for (const Edge& e : g.edges()) {
      if (labels[e.u] != labels[e.v]) cut += e.w;
    }
    if (cut <= bound) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace gpart
