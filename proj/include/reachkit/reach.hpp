#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reachkit/errors.hpp"
#include "reachkit/homotopy.hpp"
#include "reachkit/polynomial.hpp"
#include "reachkit/system.hpp"

namespace reachkit {

/// A pair of distinct points of M whose difference is normal to M at both.
struct BottleneckPair {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> lambda;
  std::vector<double> mu;
  double width = 0.0;
  double residual = 0.0;
};

struct CurvaturePoint {
  std::vector<double> x;
  double kappa = 0.0;
  /// |f(x)|
  double residual = 0.0;
  /// sine of the angle between grad(curvature^2) and grad f
  double optimality = 0.0;
};

struct ReachReport {
  std::optional<double> rho;
  std::optional<double> sigma;
  std::optional<double> tau;
  std::vector<BottleneckPair> bottlenecks;
  std::vector<CurvaturePoint> curvature_points;
  std::vector<std::string> warnings;
};

struct GeometryOptions {
  TrackerOptions tracker;
  /// Track one path per orbit of the (x, y) swap. Does not change results.
  bool symmetry_reduction = true;
  /// Pairs closer than diag_rel_tol * (max coefficient of F) are trivial.
  double diag_rel_tol = 1e-4;
  /// Reported witnesses must satisfy their systems to this tolerance.
  double witness_tol = 1e-8;
  /// More than this fraction of singular finite endpoints means the
  /// solutions are not isolated.
  double degenerate_fraction = 0.5;
};

/// The square system B(x, y, lambda, mu) in 2n + 2s variables:
///   F(x) = 0, F(y) = 0, JF(x)^T lambda - (x - y) = 0, JF(y)^T mu - (x - y) = 0.
inline PolySystem bottleneck_system(const PolySystem& system) {
  const std::size_t n = system.nvars();
  const std::size_t s = system.size();
  const std::size_t total = 2 * n + 2 * s;
  std::vector<std::string> names;
  for (const auto& v : system.var_names()) names.push_back("p_" + v);
  for (const auto& v : system.var_names()) names.push_back("q_" + v);
  for (std::size_t k = 0; k < s; ++k) names.push_back("lambda_" + std::to_string(k + 1));
  for (std::size_t k = 0; k < s; ++k) names.push_back("mu_" + std::to_string(k + 1));

  std::vector<std::size_t> to_x(n), to_y(n);
  for (std::size_t j = 0; j < n; ++j) {
    to_x[j] = j;
    to_y[j] = n + j;
  }
  const PolyMatrix jac = jacobian(system);
  std::vector<Polynomial> eqs;
  for (std::size_t k = 0; k < s; ++k) eqs.push_back(embed(system[k], total, to_x));
  for (std::size_t k = 0; k < s; ++k) eqs.push_back(embed(system[k], total, to_y));
  for (int copy = 0; copy < 2; ++copy) {
    const auto& map = copy == 0 ? to_x : to_y;
    const std::size_t mult = 2 * n + (copy == 0 ? 0 : s);
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial row = Polynomial::variable(total, n + j) - Polynomial::variable(total, j);
      for (std::size_t k = 0; k < s; ++k)
        row += embed(jac[k][j], total, map) * Polynomial::variable(total, mult + k);
      eqs.push_back(std::move(row));
    }
  }
  return PolySystem(std::move(names), std::move(eqs));
}

namespace detail {

// (x, y, lambda, mu) -> (y, x, -mu, -lambda): maps solutions of B to
// solutions of B.
inline std::vector<Complex> swap_pair(std::span<const Complex> z, std::size_t n, std::size_t s) {
  std::vector<Complex> out(z.size());
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = z[n + j];
    out[n + j] = z[j];
  }
  for (std::size_t k = 0; k < s; ++k) {
    out[2 * n + k] = -z[2 * n + s + k];
    out[2 * n + s + k] = -z[2 * n + k];
  }
  return out;
}

// Total-degree start system for B that commutes with swap_pair, so the
// path from the swapped start point is the swapped path.
inline StartSystem symmetric_bottleneck_start(const PolySystem& b, std::size_t n, std::size_t s,
                                              std::uint64_t seed) {
  const std::size_t total = 2 * n + 2 * s;
  StartSystem g;
  g.degrees.resize(total);
  g.constants.resize(total);
  g.variable_of.resize(total);
  g.sign.assign(total, 1.0);
  for (std::size_t i = 0; i < total; ++i) {
    const int d = b[i].degree();
    if (d < 1) throw ShapeError("bottleneck system has a constant equation");
    g.degrees[i] = static_cast<std::uint32_t>(d);
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < s; ++k) {
    const Complex a = rng.unit_complex();
    g.constants[k] = g.constants[s + k] = a;
    g.variable_of[k] = k;
    g.variable_of[s + k] = n + k;
  }
  // Normal-space rows: the first n - s pair with the remaining coordinates,
  // the last s with the multipliers.
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t e3 = 2 * s + j;
    const std::size_t e4 = 2 * s + n + j;
    const Complex c = rng.unit_complex();
    const double parity = (g.degrees[e3] % 2 == 0) ? 1.0 : -1.0;
    if (j < n - s) {
      g.variable_of[e3] = s + j;
      g.variable_of[e4] = n + s + j;
      g.constants[e3] = g.constants[e4] = c;
      g.sign[e4] = -1.0;
    } else {
      const std::size_t k = j - (n - s);
      g.variable_of[e3] = 2 * n + k;
      g.variable_of[e4] = 2 * n + s + k;
      g.constants[e3] = c;
      g.constants[e4] = parity * c;
      g.sign[e4] = -parity;
    }
  }
  g.gamma = rng.unit_complex();
  return g;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline std::vector<double> real_part(std::span<const Complex> z, std::size_t begin, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = z[begin + i].real();
  return out;
}

inline bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct EndpointCensus {
  std::size_t regular = 0;
  std::size_t singular = 0;
};

}  // namespace detail

/// Real bottlenecks of the complete intersection F = 0, sorted by width.
/// Throws DegenerateError when most finite off-diagonal endpoints are
/// singular (non-isolated bottlenecks, e.g. a circle).
inline std::vector<BottleneckPair> bottlenecks(const PolySystem& system, const GeometryOptions& opts = {},
                                               const ProgressFn& progress = {}) {
  const std::size_t n = system.nvars();
  const std::size_t s = system.size();
  if (s == 0 || s >= n) throw ShapeError("bottlenecks need 0 < #equations < #variables");
  for (const auto& p : system.polys())
    if (p.is_constant()) throw ShapeError("defining polynomials must be non-constant");
  const PolySystem b = bottleneck_system(system);
  const TrackerOptions& topts = opts.tracker;
  const double diag_tol = opts.diag_rel_tol * system.scale();

  StartSystem start;
  std::vector<std::uint64_t> indices;
  if (opts.symmetry_reduction) {
    start = detail::symmetric_bottleneck_start(b, n, s, topts.seed);
    for (std::uint64_t k = 0; k < start.count(); ++k) {
      const auto partner = start.index_of_point(detail::swap_pair(start.point(k), n, s));
      // Paths from swap-invariant start points stay on the diagonal x = y.
      if (k < partner) indices.push_back(k);
    }
  } else {
    start = make_total_degree_start(b, topts.seed);
    indices.resize(start.count());
    for (std::uint64_t k = 0; k < indices.size(); ++k) indices[k] = k;
  }
  std::vector<PathResult> results = track_paths(b, start, indices, topts, progress);
  if (opts.symmetry_reduction) {
    const std::size_t tracked = results.size();
    for (std::size_t i = 0; i < tracked; ++i) {
      PathResult mirror = results[i];
      mirror.start_index = start.index_of_point(detail::swap_pair(start.point(results[i].start_index), n, s));
      mirror.endpoint = detail::swap_pair(results[i].endpoint, n, s);
      results.push_back(std::move(mirror));
    }
  }

  detail::EndpointCensus census;
  for (const auto& r : results) {
    if (r.status != PathStatus::Success && r.status != PathStatus::SingularEndpoint) continue;
    double gap = 0.0;
    for (std::size_t j = 0; j < n; ++j) gap = std::max(gap, std::abs(r.endpoint[j] - r.endpoint[n + j]));
    if (gap < diag_tol) continue;
    if (r.status == PathStatus::Success)
      ++census.regular;
    else
      ++census.singular;
  }
  if (census.singular > 0 &&
      static_cast<double>(census.singular) > opts.degenerate_fraction * static_cast<double>(census.singular + census.regular))
    throw DegenerateError("bottlenecks are not isolated: " + std::to_string(census.singular) + " of " +
                          std::to_string(census.singular + census.regular) +
                          " finite off-diagonal endpoints are singular");

  const SolutionSet set = collect_solutions(results, topts);
  std::vector<BottleneckPair> pairs;
  for (const auto& sol : set.solutions) {
    if (!sol.is_real) continue;
    BottleneckPair p;
    p.x = detail::real_part(sol.point, 0, n);
    p.y = detail::real_part(sol.point, n, n);
    p.lambda = detail::real_part(sol.point, 2 * n, s);
    p.mu = detail::real_part(sol.point, 2 * n + s, s);
    std::vector<double> diff(n);
    for (std::size_t j = 0; j < n; ++j) diff[j] = p.x[j] - p.y[j];
    p.width = detail::norm2(diff);
    if (p.width < diag_tol) continue;
    // Store each geometric pair once, with x lexicographically first.
    if (detail::lex_less(p.y, p.x)) {
      std::swap(p.x, p.y);
      std::swap(p.lambda, p.mu);
      for (auto& v : p.lambda) v = -v;
      for (auto& v : p.mu) v = -v;
    }
    std::vector<double> z;
    for (const auto* part : {&p.x, &p.y, &p.lambda, &p.mu}) z.insert(z.end(), part->begin(), part->end());
    p.residual = b.residual(std::span<const double>(z));
    if (p.residual >= opts.witness_tol) continue;
    bool dup = false;
    for (const auto& q : pairs) {
      double d = 0.0;
      for (std::size_t j = 0; j < n; ++j) d = std::max({d, std::abs(q.x[j] - p.x[j]), std::abs(q.y[j] - p.y[j])});
      if (d < topts.dedupe_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) pairs.push_back(std::move(p));
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const BottleneckPair& a, const BottleneckPair& b) { return a.width < b.width; });
  return pairs;
}

/// Width of the narrowest bottleneck.
inline double narrowest_bottleneck(const std::vector<BottleneckPair>& pairs) {
  if (pairs.empty()) throw NoRealSolutionError("no bottlenecks");
  double best = pairs.front().width;
  for (const auto& p : pairs) best = std::min(best, p.width);
  return best;
}

namespace detail {

struct CurvatureParts {
  Polynomial fx, fy, fxx, fxy, fyy;
  Polynomial numerator;  // f_y^2 f_xx - 2 f_x f_y f_xy + f_x^2 f_yy
  Polynomial grad_sq;    // f_x^2 + f_y^2
};

inline CurvatureParts curvature_parts(const Polynomial& f) {
  CurvatureParts c;
  c.fx = f.differentiate(0);
  c.fy = f.differentiate(1);
  c.fxx = c.fx.differentiate(0);
  c.fxy = c.fx.differentiate(1);
  c.fyy = c.fy.differentiate(1);
  c.numerator = c.fy * c.fy * c.fxx - Complex{2.0} * c.fx * c.fy * c.fxy + c.fx * c.fx * c.fyy;
  c.grad_sq = c.fx * c.fx + c.fy * c.fy;
  return c;
}

// Truncated Taylor expansions in (x, y): value, gradient, and for Jet2 the
// Hessian (xx, xy, yy).
struct Jet1 {
  Complex v, gx, gy;
};

struct Jet2 {
  Complex v, gx, gy, hxx, hxy, hyy;
};

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v,
          a.gx * b.v + a.v * b.gx,
          a.gy * b.v + a.v * b.gy,
          a.hxx * b.v + 2.0 * a.gx * b.gx + a.v * b.hxx,
          a.hxy * b.v + a.gx * b.gy + a.gy * b.gx + a.v * b.hxy,
          a.hyy * b.v + 2.0 * a.gy * b.gy + a.v * b.hyy};
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.gx + b.gx, a.gy + b.gy, a.hxx + b.hxx, a.hxy + b.hxy, a.hyy + b.hyy};
}

inline Jet2 operator*(double s, const Jet2& a) {
  return {s * a.v, s * a.gx, s * a.gy, s * a.hxx, s * a.hxy, s * a.hyy};
}

inline Jet1 operator*(const Jet1& a, const Jet1& b) {
  return {a.v * b.v, a.gx * b.v + a.v * b.gx, a.gy * b.v + a.v * b.gy};
}

inline Jet1 operator+(const Jet1& a, const Jet1& b) { return {a.v + b.v, a.gx + b.gx, a.gy + b.gy}; }

inline Jet1 operator*(double s, const Jet1& a) { return {s * a.v, s * a.gx, s * a.gy}; }

}  // namespace detail

/// Evaluates {f, E} with E the curvature condition of curvature_system,
/// computed from the partial derivatives of f up to order four instead of
/// from the expanded form of E. The expanded E has degree 5 deg f and
/// cancels catastrophically away from the origin; this form does not.
/// Satisfies the target interface of PathTracker.
class CurvatureEvaluator {
 public:
  struct Workspace {
    CompiledSystem::Workspace inner;
    std::vector<Complex> d;
    std::vector<double> scale;
  };

  /// `condition` is the expanded E; only its coefficient norm is used.
  CurvatureEvaluator(const Polynomial& f, const Polynomial& condition) {
    if (f.nvars() != 2) throw ShapeError("curvature needs a polynomial in 2 variables");
    std::vector<Polynomial> parts;
    for (int order = 0; order <= 4; ++order) {
      for (int i = order; i >= 0; --i) {
        const int j = order - i;
        Polynomial p = f;
        for (int k = 0; k < i; ++k) p = p.differentiate(0);
        for (int k = 0; k < j; ++k) p = p.differentiate(1);
        slot_[i][j] = parts.size();
        parts.push_back(std::move(p));
      }
    }
    derivatives_ = CompiledSystem(PolySystem({"x", "y"}, std::move(parts)));
    row_norms_ = {f.max_coeff_abs(), condition.max_coeff_abs()};
  }

  std::size_t nvars() const noexcept { return 2; }
  std::size_t size() const noexcept { return 2; }
  const std::vector<double>& row_norms() const noexcept { return row_norms_; }

  Workspace make_workspace() const {
    return {derivatives_.make_workspace(), std::vector<Complex>(derivatives_.size()),
            std::vector<double>(derivatives_.size())};
  }

  void evaluate(std::span<const Complex> x, std::span<Complex> values, std::span<Complex> jac, Workspace& ws) const {
    derivatives_.evaluate(x, ws.d, {}, ws.inner);
    const auto d = [&](int i, int j) { return ws.d[slot_[i][j]]; };
    const detail::Jet1 e = condition(d, -1.0);
    values[0] = d(0, 0);
    values[1] = e.v;
    if (jac.empty()) return;
    jac[0] = d(1, 0);
    jac[1] = d(0, 1);
    jac[2] = e.gx;
    jac[3] = e.gy;
  }

  /// Row 0: the monomial magnitude of f. Row 1: E evaluated with every
  /// derivative replaced by its monomial magnitude and every subtraction
  /// by an addition, which bounds the size of the rounding error.
  void evaluation_scales(std::span<const Complex> x, std::span<double> out, Workspace& ws) const {
    derivatives_.evaluation_scales(x, ws.scale, ws.inner);
    const auto d = [&](int i, int j) { return Complex(ws.scale[slot_[i][j]], 0.0); };
    out[0] = ws.scale[slot_[0][0]];
    out[1] = std::abs(condition(d, 1.0).v);
  }

 private:
  // E = (2 G N_x - 3 N G_x) f_y - (2 G N_y - 3 N G_y) f_x with its gradient.
  // `minus` is -1 for the actual value and +1 for the magnitude bound.
  template <class D>
  static detail::Jet1 condition(const D& d, double minus) {
    const auto jet2 = [&](int i, int j) {
      return detail::Jet2{d(i, j), d(i + 1, j), d(i, j + 1), d(i + 2, j), d(i + 1, j + 1), d(i, j + 2)};
    };
    const detail::Jet2 fx = jet2(1, 0), fy = jet2(0, 1);
    const detail::Jet2 fxx = jet2(2, 0), fxy = jet2(1, 1), fyy = jet2(0, 2);
    const detail::Jet2 n = fy * fy * fxx + (2.0 * minus) * (fx * fy * fxy) + fx * fx * fyy;
    const detail::Jet2 g = fx * fx + fy * fy;
    const detail::Jet1 n0{n.v, n.gx, n.gy}, nx{n.gx, n.hxx, n.hxy}, ny{n.gy, n.hxy, n.hyy};
    const detail::Jet1 g0{g.v, g.gx, g.gy}, gx{g.gx, g.hxx, g.hxy}, gy{g.gy, g.hxy, g.hyy};
    const detail::Jet1 dx{fx.v, fx.gx, fx.gy}, dy{fy.v, fy.gx, fy.gy};
    const detail::Jet1 vx = 2.0 * (g0 * nx) + (3.0 * minus) * (n0 * gx);
    const detail::Jet1 vy = 2.0 * (g0 * ny) + (3.0 * minus) * (n0 * gy);
    return vx * dy + minus * (vy * dx);
  }

  CompiledSystem derivatives_;
  std::size_t slot_[5][5] = {};
  std::vector<double> row_norms_;
};

/// Critical points of curvature on the plane curve f = 0 as a square
/// system {f = 0, E = 0}. With N the curvature numerator and G = |grad f|^2,
/// curvature^2 = N^2 / G^3 and
///   grad(N^2 / G^3) = N (2 G grad N - 3 N grad G) / G^4,
/// so E = det[2 G grad N - 3 N grad G, grad f] is the condition that the
/// gradient of curvature is normal to the curve, with the factors N (zero
/// curvature) and G (singular points) removed.
inline PolySystem curvature_system(const Polynomial& f, const std::vector<std::string>& var_names) {
  if (f.nvars() != 2 || var_names.size() != 2) throw ShapeError("curvature needs a polynomial in 2 variables");
  if (f.is_constant()) throw ShapeError("curvature needs a non-constant polynomial");
  const auto c = detail::curvature_parts(f);
  const Polynomial two_g = Complex{2.0} * c.grad_sq;
  const Polynomial three_n = Complex{3.0} * c.numerator;
  const Polynomial vx = two_g * c.numerator.differentiate(0) - three_n * c.grad_sq.differentiate(0);
  const Polynomial vy = two_g * c.numerator.differentiate(1) - three_n * c.grad_sq.differentiate(1);
  const Polynomial a = vx * c.fy;
  const Polynomial b = vy * c.fx;
  const Polynomial e = a - b;
  // Cancellation down to rounding dust means E vanishes identically.
  const double reference = std::max(a.max_coeff_abs(), b.max_coeff_abs());
  if (e.is_zero() || e.max_coeff_abs() <= 1e-10 * reference)
    throw DegenerateError("curvature is constant along the curve; critical points are not isolated");
  return PolySystem(var_names, {f, e});
}

/// Curvature |f_y^2 f_xx - 2 f_x f_y f_xy + f_x^2 f_yy| / |grad f|^3 at a
/// real point.
inline double curvature_at(const Polynomial& f, std::span<const double> p) {
  const auto c = detail::curvature_parts(f);
  const std::vector<Complex> z(p.begin(), p.end());
  const double n = std::abs(c.numerator.evaluate(z));
  const double g = std::abs(c.grad_sq.evaluate(z));
  return n / std::pow(g, 1.5);
}

/// Maximal curvature of the real plane curve f = 0 and all real critical
/// points of curvature.
inline std::pair<double, std::vector<CurvaturePoint>> max_curvature(const Polynomial& f,
                                                                    const std::vector<std::string>& var_names,
                                                                    const GeometryOptions& opts = {},
                                                                    const ProgressFn& progress = {}) {
  const PolySystem sys = curvature_system(f, var_names);
  const TrackerOptions& topts = opts.tracker;
  const StartSystem start = make_total_degree_start(sys, topts.seed);
  const CurvatureEvaluator evaluator(sys[0], sys[1]);
  const auto results = track_all(evaluator, start, topts, progress);
  std::size_t regular = 0, singular = 0;
  for (const auto& r : results) {
    if (r.status == PathStatus::Success) ++regular;
    if (r.status == PathStatus::SingularEndpoint) ++singular;
  }
  if (singular > 0 && static_cast<double>(singular) > opts.degenerate_fraction * static_cast<double>(singular + regular))
    throw DegenerateError("curvature critical points are not isolated: " + std::to_string(singular) + " of " +
                          std::to_string(singular + regular) + " finite endpoints are singular");
  const SolutionSet set = collect_solutions(results, topts);
  const auto c = detail::curvature_parts(f);
  const Polynomial nx = c.numerator.differentiate(0), ny = c.numerator.differentiate(1);
  const Polynomial gx = c.grad_sq.differentiate(0), gy = c.grad_sq.differentiate(1);
  std::vector<CurvaturePoint> points;
  for (const auto& sol : set.solutions) {
    if (!sol.is_real) continue;
    CurvaturePoint cp;
    cp.x = detail::real_part(sol.point, 0, 2);
    const std::vector<Complex> z(cp.x.begin(), cp.x.end());
    cp.residual = std::abs(f.evaluate(z));
    if (cp.residual >= opts.witness_tol) continue;
    const double g = c.grad_sq.evaluate(z).real();
    if (g <= 0.0) continue;
    const double nv = c.numerator.evaluate(z).real();
    cp.kappa = std::abs(nv) / std::pow(g, 1.5);
    const double vx = 2 * g * nx.evaluate(z).real() - 3 * nv * gx.evaluate(z).real();
    const double vy = 2 * g * ny.evaluate(z).real() - 3 * nv * gy.evaluate(z).real();
    const double wx = c.fx.evaluate(z).real(), wy = c.fy.evaluate(z).real();
    const double vn = std::hypot(vx, vy), wn = std::hypot(wx, wy);
    cp.optimality = (vn == 0.0 || wn == 0.0) ? 0.0 : std::abs(vx * wy - vy * wx) / (vn * wn);
    points.push_back(std::move(cp));
  }
  if (points.empty()) throw NoRealSolutionError("no real critical points of curvature");
  double sigma = 0.0;
  for (const auto& p : points) sigma = std::max(sigma, p.kappa);
  return {sigma, std::move(points)};
}

/// Reach tau = min(1 / sigma, rho / 2). sigma is only available for plane
/// curves; for other varieties the report carries rho alone.
inline ReachReport reach(const PolySystem& system, const GeometryOptions& opts = {},
                         const ProgressFn& progress = {}) {
  ReachReport report;
  const bool planar = system.nvars() == 2 && system.size() == 1;
  if (planar) {
    // A constant-curvature curve fails fast here, before the bottleneck run.
    auto [sigma, points] = max_curvature(system[0], system.var_names(), opts, progress);
    report.sigma = sigma;
    report.curvature_points = std::move(points);
  } else {
    report.warnings.push_back("maximal curvature is only computed for plane curves; tau is not reported");
  }
  report.bottlenecks = bottlenecks(system, opts, progress);
  if (report.bottlenecks.empty())
    report.warnings.push_back("no real bottlenecks found");
  else
    report.rho = narrowest_bottleneck(report.bottlenecks);
  if (report.sigma) {
    const double curvature_bound = 1.0 / *report.sigma;
    report.tau = report.rho ? std::min(curvature_bound, *report.rho / 2.0) : curvature_bound;
  }
  return report;
}

}  // namespace reachkit
