#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "gpart/errors.hpp"

namespace gpart::detail {

/// Eigen-decomposition of a symmetric tridiagonal matrix by the implicit QL
/// method with Wilkinson shifts. On return `diag` holds the eigenvalues in
/// ascending order and column j of `vecs` (row-major k x k) the matching
/// unit eigenvector.
inline void tridiagonal_eigen(std::vector<double>& diag, std::vector<double> off, std::vector<double>& vecs) {
  const std::size_t k = diag.size();
  vecs.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) vecs[i * k + i] = 1.0;
  if (k == 0) return;
  off.resize(k, 0.0);  // off[i] couples i and i+1; off[k-1] unused

  for (std::size_t l = 0; l < k; ++l) {
    int iter = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < k; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw ConvergenceError("tridiagonal QL did not converge");

      double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
      double r = std::hypot(g, 1.0);
      g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      std::size_t i = m;
      bool underflow = false;
      while (i-- > l) {
        double f = s * off[i];
        const double b = c * off[i];
        r = std::hypot(f, g);
        off[i + 1] = r;
        if (r == 0.0) {
          diag[i + 1] -= p;
          off[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + 2.0 * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
        for (std::size_t row = 0; row < k; ++row) {
          f = vecs[row * k + i + 1];
          vecs[row * k + i + 1] = s * vecs[row * k + i] + c * f;
          vecs[row * k + i] = c * vecs[row * k + i] - s * f;
        }
      }
      if (underflow) continue;
      diag[l] -= p;
      off[l] = g;
      off[m] = 0.0;
    }
  }

  // selection sort keeps eigenvector columns paired with their values
  for (std::size_t i = 0; i + 1 < k; ++i) {
    std::size_t best = i;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (diag[j] < diag[best]) best = j;
    }
    if (best != i) {
      std::swap(diag[i], diag[best]);
      for (std::size_t row = 0; row < k; ++row) std::swap(vecs[row * k + i], vecs[row * k + best]);
    }
  }
}

}  // namespace gpart::detail
