#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reachkit/errors.hpp"
#include "reachkit/homotopy.hpp"
#include "reachkit/linalg.hpp"
#include "reachkit/polynomial.hpp"
#include "reachkit/rng.hpp"
#include "reachkit/system.hpp"

namespace reachkit {

/// Points on a real variety. Row i of `points` has residual
/// ||F(points[i])||_inf = residuals[i] and came from provenance[i].
struct PointCloud {
  std::vector<std::string> var_names;
  std::vector<std::vector<double>> points;
  std::vector<double> residuals;
  std::vector<std::string> provenance;
  std::size_t skipped_slices = 0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return points.size(); }
};

/// Affine slice {x : A x = b}.
struct SliceSpec {
  std::vector<std::vector<double>> a;
  std::vector<double> b;

  /// m rows with standard-normal entries scaled to unit length, and
  /// standard-normal offsets. Redraws in the (measure-zero) rank-deficient
  /// case.
  static SliceSpec random(std::size_t m, std::size_t n, Rng& rng) {
    for (;;) {
      SliceSpec s;
      std::vector<double> flat;
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> row(n);
        for (auto& v : row) v = rng.normal();
        const double norm = std::sqrt(std::inner_product(row.begin(), row.end(), row.begin(), 0.0));
        if (norm == 0.0) continue;
        for (auto& v : row) v /= norm;
        flat.insert(flat.end(), row.begin(), row.end());
        s.a.push_back(std::move(row));
      }
      for (std::size_t i = 0; i < m; ++i) s.b.push_back(rng.normal());
      if (s.a.size() == m && numerical_rank(flat, m, n) == m) return s;
    }
  }

  /// Row i is a_i . x - b_i.
  std::vector<Polynomial> equations(std::size_t n) const {
    std::vector<Polynomial> eqs;
    for (std::size_t i = 0; i < a.size(); ++i) {
      Polynomial p = Polynomial::constant(n, -b[i]);
      for (std::size_t j = 0; j < n; ++j) p += Complex{a[i][j]} * Polynomial::variable(n, j);
      eqs.push_back(std::move(p));
    }
    return eqs;
  }

  double residual(std::span<const double> x) const {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      r = std::max(r, std::abs(std::inner_product(a[i].begin(), a[i].end(), x.begin(), 0.0) - b[i]));
    return r;
  }
};

/// Largest residual accepted for a sampled point.
inline constexpr double kSampleTol = 1e-8;

namespace detail {

inline std::vector<double> real_point(const Solution& s) {
  std::vector<double> p;
  p.reserve(s.point.size());
  for (const auto& z : s.point) p.push_back(z.real());
  return p;
}

// Jacobian of `system` at a real point, row-major.
inline std::vector<double> real_jacobian(const PolyMatrix& jac, std::span<const double> x) {
  const std::vector<Complex> z(x.begin(), x.end());
  std::vector<double> out;
  for (const auto& row : jac)
    for (const auto& p : row) out.push_back(p.evaluate(z).real());
  return out;
}

// Canonical order of a cloud: lexicographic on the coordinates.
inline void sort_cloud(PointCloud& cloud) {
  std::vector<std::size_t> order(cloud.points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::lexicographical_compare(cloud.points[i].begin(), cloud.points[i].end(), cloud.points[j].begin(),
                                        cloud.points[j].end());
  });
  PointCloud sorted;
  for (std::size_t i : order) {
    sorted.points.push_back(std::move(cloud.points[i]));
    sorted.residuals.push_back(cloud.residuals[i]);
    sorted.provenance.push_back(std::move(cloud.provenance[i]));
  }
  cloud.points = std::move(sorted.points);
  cloud.residuals = std::move(sorted.residuals);
  cloud.provenance = std::move(sorted.provenance);
}

}  // namespace detail

/// Samples M = F^{-1}(0) (dimension dim_m, assumed a complete intersection)
/// by intersecting it with `n_slices` random affine spaces of complementary
/// dimension. Slice k draws its coefficients and its start system from
/// derive_seed(opts.seed, k).
inline PointCloud slice_sample(const PolySystem& system, std::size_t dim_m, std::size_t n_slices,
                               const TrackerOptions& opts, const ProgressFn& progress = {}) {
  const std::size_t n = system.nvars();
  if (dim_m < 1) throw ShapeError("variety dimension must be at least 1");
  if (system.size() + dim_m != n)
    throw ShapeError(std::to_string(system.size()) + " equations and dimension " + std::to_string(dim_m) +
                     " do not add up to " + std::to_string(n) + " variables");
  opts.validate();
  const PolyMatrix jac = jacobian(system);
  PointCloud cloud;
  cloud.var_names = system.var_names();
  std::size_t rank_deficient = 0;
  for (std::size_t k = 0; k < n_slices; ++k) {
    const std::uint64_t slice_seed = derive_seed(opts.seed, k);
    Rng rng(slice_seed);
    const SliceSpec slice = SliceSpec::random(dim_m, n, rng);
    auto polys = system.polys();
    for (auto& e : slice.equations(n)) polys.push_back(std::move(e));
    TrackerOptions slice_opts = opts;
    slice_opts.seed = slice_seed;
    SolutionSet set;
    try {
      set = solve_all(PolySystem(system.var_names(), std::move(polys)), slice_opts, progress);
    } catch (const AllPathsFailedError&) {
      ++cloud.skipped_slices;
      continue;
    }
    for (const auto& sol : set.solutions) {
      if (!sol.is_real) continue;
      auto p = detail::real_point(sol);
      const double r = system.residual(std::span<const double>(p));
      if (!(r < kSampleTol) || !(slice.residual(p) < kSampleTol)) continue;
      if (numerical_rank(detail::real_jacobian(jac, p), system.size(), n) < system.size()) ++rank_deficient;
      cloud.points.push_back(std::move(p));
      cloud.residuals.push_back(r);
      cloud.provenance.push_back("slice " + std::to_string(k) + " seed " + std::to_string(slice_seed));
    }
  }
  if (cloud.skipped_slices > 0)
    cloud.warnings.push_back(std::to_string(cloud.skipped_slices) + " slices skipped because all paths failed");
  if (rank_deficient > 0)
    cloud.warnings.push_back("Jacobian rank below the number of equations at " + std::to_string(rank_deficient) +
                             " points; the variety may not be a complete intersection");
  detail::sort_cloud(cloud);
  return cloud;
}

struct NearestPoint {
  std::vector<double> point;
  double distance = 0.0;
  double residual = 0.0;
};

/// The Lagrange system F(x) = 0, JF(x)^T lambda - (x - q) = 0 in the
/// variables (x, lambda_1..lambda_s).
inline PolySystem nearest_point_system(const PolySystem& system, std::span<const double> q) {
  const std::size_t n = system.nvars();
  const std::size_t s = system.size();
  if (q.size() != n) throw DimensionError("query point has " + std::to_string(q.size()) + " coordinates, expected " +
                                          std::to_string(n));
  const std::size_t total = n + s;
  std::vector<std::string> names = system.var_names();
  for (std::size_t k = 0; k < s; ++k) names.push_back("lambda_" + std::to_string(k + 1));
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  const PolyMatrix jac = jacobian(system);
  std::vector<Polynomial> eqs;
  for (const auto& p : system.polys()) eqs.push_back(embed(p, total, map));
  for (std::size_t j = 0; j < n; ++j) {
    Polynomial row = Polynomial::constant(total, q[j]) - Polynomial::variable(total, j);
    for (std::size_t k = 0; k < s; ++k) row += embed(jac[k][j], total, map) * Polynomial::variable(total, n + k);
    eqs.push_back(std::move(row));
  }
  return PolySystem(std::move(names), std::move(eqs));
}

/// The real point of M closest to q among the critical points of the
/// squared distance.
inline NearestPoint nearest_point(const PolySystem& system, std::span<const double> q, const TrackerOptions& opts,
                                  const ProgressFn& progress = {}) {
  if (system.size() == 0 || system.size() > system.nvars())
    throw ShapeError("nearest point needs between 1 and n equations");
  const std::size_t n = system.nvars();
  const SolutionSet set = solve_all(nearest_point_system(system, q), opts, progress);
  std::optional<NearestPoint> best;
  for (const auto& sol : set.solutions) {
    if (!sol.is_real) continue;
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = sol.point[j].real();
    const double r = system.residual(std::span<const double>(x));
    if (!(r < kSampleTol)) continue;
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) d += (x[j] - q[j]) * (x[j] - q[j]);
    d = std::sqrt(d);
    // Solutions arrive canonically sorted, so strict < breaks ties by that order.
    if (!best || d < best->distance) best = NearestPoint{std::move(x), d, r};
  }
  if (!best) throw NoRealSolutionError("no real critical point of the distance function");
  return *best;
}

/// Cyclooctane conformations with bond length c: atoms x1..x8 in R^3 with
/// ||x_i - x_{i+1}||^2 = c^2 and ||x_i - x_{i+2}||^2 = 8/3 c^2 (indices
/// mod 8). The reduced system fixes x1 = 0, x2 = (c, 0, 0) and the third
/// coordinate of x3, and drops the then constant ||x1 - x2||^2 = c^2.
struct CyclooctaneModel {
  double c = 0.0;
  /// 15 quadratics in the 17 coordinates x3_1, x3_2, x4_1, ..., x8_3.
  PolySystem reduced;
  /// All 16 equations in the 24 coordinates x1_1, ..., x8_3.
  PolySystem full;

  /// Maps a point of `reduced` to the 24 atom coordinates.
  std::vector<double> embed_point(std::span<const double> r) const {
    if (r.size() != reduced.nvars()) throw DimensionError("reduced cyclooctane point needs 17 coordinates");
    std::vector<double> x(24, 0.0);
    x[3] = c;
    x[6] = r[0];
    x[7] = r[1];
    std::copy(r.begin() + 2, r.end(), x.begin() + 9);
    return x;
  }
};

namespace detail {

inline std::vector<std::string> atom_names(std::size_t first_atom) {
  std::vector<std::string> names;
  for (std::size_t a = first_atom; a <= 8; ++a)
    for (int k = 1; k <= 3; ++k) names.push_back("x" + std::to_string(a) + "_" + std::to_string(k));
  return names;
}

// Sixteen distance equations; coord(atom, k) gives coordinate k of atom
// (both 0-based) as a polynomial.
template <class Coord>
std::vector<Polynomial> cyclooctane_equations(double c, const Coord& coord) {
  std::vector<Polynomial> eqs;
  for (std::size_t offset : {1u, 2u}) {
    const double target = offset == 1 ? c * c : 8.0 / 3.0 * c * c;
    for (std::size_t i = 0; i < 8; ++i) {
      const std::size_t j = (i + offset) % 8;
      Polynomial p = coord(i, 0) - coord(j, 0);
      p = p * p;
      for (std::size_t k = 1; k < 3; ++k) {
        const Polynomial d = coord(i, k) - coord(j, k);
        p += d * d;
      }
      eqs.push_back(p - Polynomial::constant(p.nvars(), target));
    }
  }
  return eqs;
}

}  // namespace detail

inline CyclooctaneModel build_cyclooctane(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DimensionError("bond length c must be positive");
  CyclooctaneModel m;
  m.c = c;
  m.full = PolySystem(detail::atom_names(1), detail::cyclooctane_equations(c, [](std::size_t atom, std::size_t k) {
                        return Polynomial::variable(24, 3 * atom + k);
                      }));
  std::vector<std::string> names = {"x3_1", "x3_2"};
  for (auto& v : detail::atom_names(4)) names.push_back(std::move(v));
  auto eqs = detail::cyclooctane_equations(c, [c](std::size_t atom, std::size_t k) {
    if (atom == 0) return Polynomial(17);
    if (atom == 1) return k == 0 ? Polynomial::constant(17, c) : Polynomial(17);
    if (atom == 2) return k == 2 ? Polynomial(17) : Polynomial::variable(17, k);
    return Polynomial::variable(17, 2 + 3 * (atom - 3) + k);
  });
  // ||x1 - x2||^2 - c^2 is now c^2 - c^2.
  if (!eqs.front().is_constant() || eqs.front().max_coeff_abs() > 1e-12 * c * c)
    throw DimensionError("fixed bond equation did not vanish");
  eqs.erase(eqs.begin());
  m.reduced = PolySystem(std::move(names), std::move(eqs));
  return m;
}

/// Slice samples of the reduced cyclooctane variety (dimension 2), embedded
/// in R^24. Residuals are those of the 16 original equations.
inline PointCloud sample_cyclooctane(const CyclooctaneModel& model, std::size_t n_slices, const TrackerOptions& opts,
                                     const ProgressFn& progress = {}) {
  PointCloud reduced = slice_sample(model.reduced, 2, n_slices, opts, progress);
  PointCloud cloud;
  cloud.var_names = model.full.var_names();
  cloud.skipped_slices = reduced.skipped_slices;
  cloud.warnings = reduced.warnings;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    auto x = model.embed_point(reduced.points[i]);
    const double r = model.full.residual(std::span<const double>(x));
    if (!(r < kSampleTol)) continue;
    cloud.points.push_back(std::move(x));
    cloud.residuals.push_back(r);
    cloud.provenance.push_back(reduced.provenance[i]);
  }
  return cloud;
}

}  // namespace reachkit
