#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <utility>

#include "reachkit/polynomial.hpp"

namespace reachkit {

/// Solves a * x = b in place (x overwrites b) for a row-major n x n complex
/// matrix, destroying `a`. Rows are equilibrated to unit max-norm, then
/// reduced by Gaussian elimination with partial pivoting.
///
/// Returns the condition estimate max|u_ii| / min|u_ii| of the equilibrated
/// factor; +inf when a pivot is exactly zero (b is then unspecified).
inline double lu_solve(std::span<Complex> a, std::span<Complex> b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::norm(a[i * n + j]));
    m = std::sqrt(m);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    const double inv = 1.0 / m;
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] *= inv;
    b[i] *= inv;
  }
  double pmax = 0.0;
  double pmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::norm(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::norm(a[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return std::numeric_limits<double>::infinity();
    if (piv != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    const Complex inv_pivot = std::conj(a[k * n + k]) / best;
    const double pabs = std::sqrt(best);
    pmax = std::max(pmax, pabs);
    pmin = std::min(pmin, pabs);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = a[i * n + k] * inv_pivot;
      if (factor == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= factor * a[k * n + j];
      b[i] -= factor * b[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    Complex s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k * n + j] * b[j];
    b[k] = s * std::conj(a[k * n + k]) / std::norm(a[k * n + k]);
  }
  return pmax / pmin;
}

/// Numerical rank of a real row-major rows x cols matrix via Gaussian
/// elimination with complete pivoting; entries below `rel_tol` times the
/// largest entry count as zero.
inline std::size_t numerical_rank(std::vector<double> a, std::size_t rows, std::size_t cols, double rel_tol = 1e-10) {
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  if (amax == 0.0) return 0;
  std::size_t rank = 0;
  std::vector<bool> row_used(rows, false);
  std::vector<bool> col_used(cols, false);
  for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
    double best = 0.0;
    std::size_t pr = 0, pc = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j]) continue;
        if (std::abs(a[i * cols + j]) > best) {
          best = std::abs(a[i * cols + j]);
          pr = i;
          pc = j;
        }
      }
    }
    if (best <= rel_tol * amax) break;
    row_used[pr] = true;
    col_used[pc] = true;
    ++rank;
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_used[i]) continue;
      const double f = a[i * cols + pc] / a[pr * cols + pc];
      for (std::size_t j = 0; j < cols; ++j) a[i * cols + j] -= f * a[pr * cols + j];
    }
  }
  return rank;
}

inline double inf_norm(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::norm(z));
  return std::sqrt(m);
}

}  // namespace reachkit
