#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "reachkit/errors.hpp"
#include "reachkit/linalg.hpp"
#include "reachkit/polynomial.hpp"
#include "reachkit/rng.hpp"
#include "reachkit/system.hpp"

namespace reachkit {

/// Jacobians with a (row-equilibrated) pivot ratio above this are singular.
inline constexpr double kSingularCondition = 1e12;

struct TrackerOptions {
  double step_initial = 0.05;
  double step_min = 1e-7;
  double step_max = 0.1;
  double newton_tol = 1e-10;
  int newton_max_iter = 10;
  /// Newton iterations allowed per corrector step along the path; a small
  /// cap keeps the corrector from converging onto a neighbouring path.
  int corrector_max_iter = 3;
  int max_steps = 10000;
  double divergence_norm = 1e8;
  double final_refine_tol = 1e-12;
  double dedupe_tol = 1e-6;
  double real_tol = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  /// Number of threads tracking paths. Results do not depend on it.
  unsigned workers = 1;

  void validate() const {
    if (!(0 < step_min && step_min <= step_initial && step_initial <= step_max && step_max <= 1))
      throw DimensionError("step sizes must satisfy 0 < step_min <= step_initial <= step_max <= 1");
    if (!(newton_tol > 0 && final_refine_tol > 0 && dedupe_tol > 0 && real_tol > 0 && divergence_norm > 0))
      throw DimensionError("tolerances must be positive");
    if (newton_max_iter < 1 || corrector_max_iter < 1 || max_steps < 1) throw DimensionError("iteration limits must be positive");
    if (workers < 1) throw DimensionError("workers must be >= 1");
  }
};

/// Total-degree start system G_i(x) = sign_i * (x_{v(i)}^{d_i} - a_i).
/// The usual form has v = identity and sign = +1; the bottleneck solver uses
/// a permuted, signed variant so that the homotopy commutes with the swap
/// symmetry of its target system.
struct StartSystem {
  std::vector<Complex> constants;
  std::vector<std::uint32_t> degrees;
  Complex gamma{1.0, 0.0};
  std::vector<std::size_t> variable_of;
  std::vector<double> sign;

  std::size_t size() const noexcept { return degrees.size(); }

  std::uint64_t count() const {
    std::uint64_t d = 1;
    for (auto di : degrees) d *= di;
    return d;
  }

  /// Root of x^d = a with index r (|a| = 1 so the modulus is 1).
  Complex root(std::size_t eq, std::uint64_t r) const {
    const double d = degrees[eq];
    return std::polar(1.0, (std::arg(constants[eq]) + 2.0 * std::numbers::pi * static_cast<double>(r)) / d);
  }

  /// Root indices of start point k (equation 0 varies fastest).
  std::vector<std::uint64_t> digits(std::uint64_t k) const {
    std::vector<std::uint64_t> r(size());
    for (std::size_t i = 0; i < size(); ++i) {
      r[i] = k % degrees[i];
      k /= degrees[i];
    }
    return r;
  }

  std::uint64_t index_of(std::span<const std::uint64_t> digits) const {
    std::uint64_t k = 0;
    for (std::size_t i = size(); i-- > 0;) k = k * degrees[i] + digits[i];
    return k;
  }

  /// Index of the start point closest to x (x is assumed to be one).
  std::uint64_t index_of_point(std::span<const Complex> x) const {
    std::vector<std::uint64_t> r(size());
    for (std::size_t i = 0; i < size(); ++i) {
      const double d = degrees[i];
      const double turns = (d * std::arg(x[variable_of[i]]) - std::arg(constants[i])) / (2.0 * std::numbers::pi);
      const auto q = static_cast<std::int64_t>(std::llround(turns));
      const auto di = static_cast<std::int64_t>(degrees[i]);
      r[i] = static_cast<std::uint64_t>(((q % di) + di) % di);
    }
    return index_of(r);
  }

  std::vector<Complex> point(std::uint64_t k) const {
    std::vector<Complex> x(size());
    const auto r = digits(k);
    for (std::size_t i = 0; i < size(); ++i) x[variable_of[i]] = root(i, r[i]);
    return x;
  }

  /// values[i] = G_i(x); diag[i] = dG_i / dx_{v(i)} (the only non-zero
  /// entry in row i of the Jacobian).
  void evaluate(std::span<const Complex> x, std::span<Complex> values, std::span<Complex> diag) const {
    for (std::size_t i = 0; i < size(); ++i) {
      const Complex z = x[variable_of[i]];
      Complex p{1.0, 0.0};
      for (std::uint32_t k = 1; k < degrees[i]; ++k) p *= z;  // z^(d-1)
      values[i] = sign[i] * (p * z - constants[i]);
      diag[i] = sign[i] * static_cast<double>(degrees[i]) * p;
    }
  }
};

/// Start system with random unit-modulus constants and gamma drawn from
/// `seed`. Requires a square system with no constant polynomial.
inline StartSystem make_total_degree_start(const PolySystem& target, std::uint64_t seed) {
  bezout_number(target);  // validates squareness and non-zero polynomials
  StartSystem g;
  Rng rng(seed);
  for (std::size_t i = 0; i < target.size(); ++i) {
    const int d = target[i].degree();
    if (d < 1) throw ShapeError("start system needs every polynomial to have degree >= 1");
    g.degrees.push_back(static_cast<std::uint32_t>(d));
    g.constants.push_back(rng.unit_complex());
    g.variable_of.push_back(i);
    g.sign.push_back(1.0);
  }
  g.gamma = rng.unit_complex();
  return g;
}

/// The start system plus the enumeration of all of its D = prod d_i
/// solutions.
inline std::pair<StartSystem, std::vector<std::vector<Complex>>> make_start(const PolySystem& target,
                                                                           std::uint64_t seed) {
  StartSystem g = make_total_degree_start(target, seed);
  std::vector<std::vector<Complex>> points;
  const auto total = g.count();
  points.reserve(total);
  for (std::uint64_t k = 0; k < total; ++k) points.push_back(g.point(k));
  return {std::move(g), std::move(points)};
}

enum class PathStatus {
  Success,
  Diverged,
  StepsExceeded,
  SingularEndpoint,
  /// The step size collapsed below its floor before t = 1.
  StepFailure,
};

inline const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Success: return "Success";
    case PathStatus::Diverged: return "Diverged";
    case PathStatus::StepsExceeded: return "StepsExceeded";
    case PathStatus::SingularEndpoint: return "SingularEndpoint";
    case PathStatus::StepFailure: return "StepFailure";
  }
  return "?";
}

struct PathResult {
  PathStatus status = PathStatus::StepFailure;
  std::vector<Complex> endpoint;  // meaningful for Success
  double residual = std::numeric_limits<double>::infinity();
  int steps_used = 0;
  std::uint64_t start_index = 0;
  /// ||x||_inf where tracking stopped
  double norm = 0.0;
  /// Jacobian condition estimate of F at the endpoint (0 if never reached)
  double condition = 0.0;
  /// 1 - t where tracking stopped
  double remaining = 1.0;
};

/// Predictor-corrector tracker for H(x, t) = gamma (1 - t) G(x) + t F(x)
/// from t = 0 to t = 1. Owns the scratch memory for one thread; not
/// shareable across threads.
///
/// `Target` evaluates F and its Jacobian; it needs the interface of
/// CompiledSystem (nvars, size, make_workspace, evaluate,
/// evaluation_scales, row_norms). Each row of F is divided by its row norm
/// while tracking so that F and G have comparable magnitudes.
template <class Target = CompiledSystem>
class PathTracker {
 public:
  PathTracker(const Target& target, const StartSystem& start, const TrackerOptions& opts)
      : target_(target), start_(start), opts_(opts), n_(target.nvars()), ws_(target.make_workspace()) {
    if (target.size() != n_ || start.size() != n_) throw NonSquareSystemError("homotopy needs a square system");
    for (auto* v : {&x_, &xp_, &xs_, &k1_, &k2_, &k3_, &k4_, &fv_, &gv_, &gd_, &rhs_}) v->resize(n_);
    fj_.resize(n_ * n_);
    mat_.resize(n_ * n_);
    weight_.resize(n_);
    scales_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double norm = target.row_norms()[i];
      weight_[i] = norm > 0.0 ? 1.0 / norm : 1.0;
    }
  }

  PathResult track(std::span<const Complex> x0, std::uint64_t index = 0) {
    PathResult result;
    result.start_index = index;
    std::copy(x0.begin(), x0.end(), x_.begin());
    double rem = 1.0;  // 1 - t, kept directly so it resolves values near t = 1
    double h = opts_.step_initial;
    int streak = 0;
    int steps = 0;
    while (rem > 0.0) {
      if (steps >= opts_.max_steps) return stop(result, PathStatus::StepsExceeded, steps, rem);
      ++steps;
      const bool last = h >= rem;
      const double h_eff = last ? rem : h;
      const double rem_new = last ? 0.0 : rem - h_eff;
      if (predict(rem, h_eff) && correct(rem_new)) {
        std::copy(xp_.begin(), xp_.end(), x_.begin());
        rem = rem_new;
        if (inf_norm(x_) >= opts_.divergence_norm) return stop(result, PathStatus::Diverged, steps, rem);
        if (++streak >= 5) {
          h = std::min(2.0 * h, opts_.step_max);
          streak = 0;
        }
      } else {
        streak = 0;
        h = 0.5 * h_eff;
        // The floor shrinks with 1 - t: high-degree systems can approach
        // regular endpoints only for 1 - t far below step_min. Paths heading
        // to infinity or to a singular endpoint end here.
        if (h < opts_.step_min * std::min(1.0, rem)) return stop(result, PathStatus::StepFailure, steps, rem);
      }
      if (rem > 0.0 && rem < kMinRemaining) return stop(result, PathStatus::StepFailure, steps, rem);
    }
    return finish(result, steps);
  }

  /// Newton's method on F alone. Returns the final step norm; `cond`
  /// receives the condition estimate of the last factorization.
  double refine(std::span<Complex> x, double tol, int max_iter, double& cond) {
    cond = 0.0;
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
      evaluate_target(x, true);
      std::copy(fj_.begin(), fj_.end(), mat_.begin());
      for (std::size_t i = 0; i < n_; ++i) rhs_[i] = -fv_[i];
      if (inf_norm(fv_) == 0.0) {
        cond = condition_at(x);
        return 0.0;
      }
      cond = lu_solve(mat_, rhs_, n_);
      if (!std::isfinite(cond) || cond > kSingularCondition) return last;
      for (std::size_t i = 0; i < n_; ++i) x[i] += rhs_[i];
      last = inf_norm(rhs_);
      if (last <= tol * (1.0 + inf_norm(x))) break;
    }
    cond = condition_at(x);
    return last;
  }

 private:
  /// Each corrector update must shrink by at least this factor.
  static constexpr double kCorrectorContraction = 0.25;
  /// A predictor this far off (relative to |x|) is not trusted.
  static constexpr double kMaxFirstCorrection = 0.1;
  /// Tracking gives up when 1 - t falls below this without reaching t = 1.
  static constexpr double kMinRemaining = 1e-24;

  // F(x) (and its Jacobian) into fv_ / fj_, rows divided by their norms.
  void evaluate_target(std::span<const Complex> x, bool want_jac) {
    target_.evaluate(x, fv_, want_jac ? std::span<Complex>(fj_) : std::span<Complex>(), ws_);
    for (std::size_t i = 0; i < n_; ++i) {
      fv_[i] *= weight_[i];
      if (want_jac)
        for (std::size_t j = 0; j < n_; ++j) fj_[i * n_ + j] *= weight_[i];
    }
  }

  double condition_at(std::span<const Complex> x) {
    evaluate_target(x, true);
    std::copy(fj_.begin(), fj_.end(), mat_.begin());
    std::fill(rhs_.begin(), rhs_.end(), Complex{});
    return lu_solve(mat_, rhs_, n_);
  }

  // Assembles H (into fv_) and H_x (into mat_) at (x, rem); gv_ keeps G(x)
  // so that H_t = F - gamma G can be formed afterwards.
  void assemble(std::span<const Complex> x, double rem, bool want_ht) {
    const double t = 1.0 - rem;
    evaluate_target(x, true);
    start_.evaluate(x, gv_, gd_);
    const Complex gr = start_.gamma * rem;
    for (std::size_t k = 0; k < n_ * n_; ++k) mat_[k] = t * fj_[k];
    for (std::size_t i = 0; i < n_; ++i) mat_[i * n_ + start_.variable_of[i]] += gr * gd_[i];
    for (std::size_t i = 0; i < n_; ++i) {
      if (want_ht)
        rhs_[i] = -(fv_[i] - start_.gamma * gv_[i]);  // -H_t
      else
        rhs_[i] = -(t * fv_[i] + gr * gv_[i]);  // -H
    }
  }

  // dx/dt = -H_x^{-1} H_t
  bool velocity(std::span<const Complex> x, double rem, std::vector<Complex>& out) {
    assemble(x, rem, true);
    const double cond = lu_solve(mat_, rhs_, n_);
    if (!std::isfinite(cond)) return false;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!std::isfinite(rhs_[i].real()) || !std::isfinite(rhs_[i].imag())) return false;
      out[i] = rhs_[i];
    }
    return true;
  }

  // Classical RK4 step from (x_, rem) with dt = h; result in xp_.
  bool predict(double rem, double h) {
    if (!velocity(x_, rem, k1_)) return false;
    for (std::size_t i = 0; i < n_; ++i) xs_[i] = x_[i] + 0.5 * h * k1_[i];
    if (!velocity(xs_, rem - 0.5 * h, k2_)) return false;
    for (std::size_t i = 0; i < n_; ++i) xs_[i] = x_[i] + 0.5 * h * k2_[i];
    if (!velocity(xs_, rem - 0.5 * h, k3_)) return false;
    for (std::size_t i = 0; i < n_; ++i) xs_[i] = x_[i] + h * k3_[i];
    if (!velocity(xs_, std::max(rem - h, 0.0), k4_)) return false;
    for (std::size_t i = 0; i < n_; ++i) xp_[i] = x_[i] + (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    return true;
  }

  // Newton on H(., rem) starting from xp_. Fails when the iteration stops
  // contracting, which keeps the corrector from wandering onto another path.
  bool correct(double rem) {
    double prev = std::numeric_limits<double>::infinity();
    const int iters = std::min(opts_.newton_max_iter, opts_.corrector_max_iter);
    for (int it = 0; it < iters; ++it) {
      assemble(xp_, rem, false);
      const double cond = lu_solve(mat_, rhs_, n_);
      if (!std::isfinite(cond)) return false;
      for (std::size_t i = 0; i < n_; ++i) xp_[i] += rhs_[i];
      const double dx = inf_norm(rhs_);
      if (!std::isfinite(dx)) return false;
      if (dx <= opts_.newton_tol * (1.0 + inf_norm(xp_))) return true;
      if (it == 0 && dx > kMaxFirstCorrection * (1.0 + inf_norm(xp_))) return false;
      if (it > 0 && dx > kCorrectorContraction * prev) return false;
      prev = dx;
    }
    return false;
  }

  PathResult& stop(PathResult& r, PathStatus status, int steps, double rem) {
    r.status = status;
    r.steps_used = steps;
    r.remaining = rem;
    r.norm = inf_norm(x_);
    r.endpoint = x_;
    return r;
  }

  // Polishes the endpoint on F and classifies it.
  PathResult& finish(PathResult& r, int steps) {
    stop(r, PathStatus::Success, steps, 0.0);
    double cond = 0.0;
    refine(r.endpoint, opts_.final_refine_tol, opts_.newton_max_iter, cond);
    target_.evaluate(r.endpoint, fv_, {}, ws_);
    target_.evaluation_scales(r.endpoint, scales_, ws_);
    r.residual = inf_norm(fv_);
    r.condition = cond;
    r.norm = inf_norm(r.endpoint);
    if (!std::isfinite(r.residual) || !std::isfinite(r.norm)) {
      r.status = PathStatus::StepFailure;
      return r;
    }
    if (r.norm >= opts_.divergence_norm) {
      r.status = PathStatus::Diverged;
      return r;
    }
    if (!std::isfinite(cond) || cond > kSingularCondition) {
      r.status = PathStatus::SingularEndpoint;
      return r;
    }
    for (std::size_t i = 0; i < n_; ++i)
      if (std::abs(fv_[i]) > opts_.final_refine_tol * (1.0 + scales_[i])) r.status = PathStatus::StepFailure;
    return r;
  }

  const Target& target_;
  const StartSystem& start_;
  TrackerOptions opts_;
  std::size_t n_;
  typename Target::Workspace ws_;
  std::vector<double> weight_, scales_;
  std::vector<Complex> x_, xp_, xs_, k1_, k2_, k3_, k4_, fv_, gv_, gd_, rhs_, fj_, mat_;
};

/// Tracks one path of the homotopy from start point x0.
inline PathResult track_path(const PolySystem& target, const StartSystem& start, std::span<const Complex> x0,
                             const TrackerOptions& opts, std::uint64_t index = 0) {
  opts.validate();
  const CompiledSystem compiled(target);
  PathTracker<CompiledSystem> tracker(compiled, start, opts);
  return tracker.track(x0, index);
}

using ProgressFn = std::function<void(std::uint64_t done, std::uint64_t total)>;

/// Tracks the start points with the given indices on `opts.workers`
/// threads. Each path is tracked independently, so the output (in the order
/// of `indices`) is the same for every worker count.
template <class Target>
std::vector<PathResult> track_paths(const Target& compiled, const StartSystem& start,
                                    std::span<const std::uint64_t> indices, const TrackerOptions& opts,
                                    const ProgressFn& progress = {}) {
  opts.validate();
  std::vector<PathResult> results(indices.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> done{0};
  std::mutex progress_mutex;
  auto work = [&] {
    PathTracker<Target> tracker(compiled, start, opts);
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= indices.size()) break;
      const auto x0 = start.point(indices[k]);
      results[k] = tracker.track(x0, indices[k]);
      const auto d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(d, indices.size());
      }
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(indices.size())));
  if (nthreads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(work);
  }
  return results;
}

inline std::vector<PathResult> track_paths(const PolySystem& target, const StartSystem& start,
                                           std::span<const std::uint64_t> indices, const TrackerOptions& opts,
                                           const ProgressFn& progress = {}) {
  const CompiledSystem compiled(target);
  return track_paths<CompiledSystem>(compiled, start, indices, opts, progress);
}

template <class Target>
std::vector<PathResult> track_all(const Target& target, const StartSystem& start, const TrackerOptions& opts,
                                  const ProgressFn& progress = {}) {
  std::vector<std::uint64_t> indices(start.count());
  for (std::uint64_t k = 0; k < indices.size(); ++k) indices[k] = k;
  return track_paths(target, start, std::span<const std::uint64_t>(indices), opts, progress);
}

/// Newton refinement on a square system. Returns the polished point and
/// ||F(x)||_inf. Throws SingularJacobianError when the Jacobian condition
/// estimate exceeds 1e12.
inline std::pair<std::vector<Complex>, double> newton_refine(const PolySystem& system, std::vector<Complex> x,
                                                             double tol, int max_iter) {
  if (!system.is_square()) throw NonSquareSystemError("Newton refinement needs a square system");
  if (x.size() != system.nvars()) throw DimensionError("point has wrong dimension");
  const CompiledSystem compiled(system);
  StartSystem dummy;
  dummy.degrees.assign(system.size(), 1);
  dummy.constants.assign(system.size(), 1.0);
  dummy.sign.assign(system.size(), 1.0);
  for (std::size_t i = 0; i < system.size(); ++i) dummy.variable_of.push_back(i);
  PathTracker<CompiledSystem> tracker(compiled, dummy, TrackerOptions{});
  double cond = 0.0;
  tracker.refine(x, tol, max_iter, cond);
  if (!std::isfinite(cond) || cond > kSingularCondition) throw SingularJacobianError(cond);
  return {x, system.residual(x)};
}

struct Solution {
  std::vector<Complex> point;
  double residual = 0.0;
  bool is_real = false;
};

struct SolutionSet {
  std::vector<Solution> solutions;
  std::size_t diverged_count = 0;
  std::size_t failed_count = 0;
  std::uint64_t bezout = 0;
  std::uint64_t seed = 0;

  std::vector<std::vector<double>> real_points() const {
    std::vector<std::vector<double>> out;
    for (const auto& s : solutions) {
      if (!s.is_real) continue;
      std::vector<double> p;
      for (const auto& z : s.point) p.push_back(z.real());
      out.push_back(std::move(p));
    }
    return out;
  }
};

inline bool is_real_point(std::span<const Complex> x, double real_tol) {
  double im = 0.0, mag = 0.0;
  for (const auto& z : x) {
    im = std::max(im, std::abs(z.imag()));
    mag = std::max(mag, std::abs(z));
  }
  return im < real_tol * (1.0 + mag);
}

/// max over coordinates of max(|d re|, |d im|)
inline double stacked_distance(std::span<const Complex> a, std::span<const Complex> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max({d, std::abs(a[i].real() - b[i].real()), std::abs(a[i].imag() - b[i].imag())});
  return d;
}

/// Lexicographic on (re_0, im_0, re_1, im_1, ...).
inline bool canonical_less(std::span<const Complex> a, std::span<const Complex> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

/// Deduplicates successful endpoints (the lowest start index wins),
/// classifies them real/complex and sorts them canonically.
inline SolutionSet collect_solutions(const std::vector<PathResult>& results, const TrackerOptions& opts) {
  SolutionSet set;
  set.seed = opts.seed;
  std::vector<const PathResult*> ok;
  for (const auto& r : results) {
    if (r.status == PathStatus::Success)
      ok.push_back(&r);
    else if (r.status == PathStatus::Diverged)
      ++set.diverged_count;
    else
      ++set.failed_count;
  }
  std::sort(ok.begin(), ok.end(), [](auto* a, auto* b) { return a->start_index < b->start_index; });
  // Index kept endpoints by the real part of their first coordinate.
  std::multimap<double, std::size_t> by_key;
  for (const PathResult* r : ok) {
    const double key = r->endpoint.empty() ? 0.0 : r->endpoint[0].real();
    bool dup = false;
    for (auto it = by_key.lower_bound(key - opts.dedupe_tol); it != by_key.end() && it->first <= key + opts.dedupe_tol;
         ++it) {
      if (stacked_distance(set.solutions[it->second].point, r->endpoint) < opts.dedupe_tol) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    by_key.emplace(key, set.solutions.size());
    set.solutions.push_back({r->endpoint, r->residual, is_real_point(r->endpoint, opts.real_tol)});
  }
  std::sort(set.solutions.begin(), set.solutions.end(),
            [](const Solution& a, const Solution& b) { return canonical_less(a.point, b.point); });
  return set;
}

/// Finds all isolated solutions reachable from the total-degree start system.
inline SolutionSet solve_all(const PolySystem& system, const TrackerOptions& opts, const ProgressFn& progress = {}) {
  opts.validate();
  const auto bezout = bezout_number(system);
  const StartSystem start = make_total_degree_start(system, opts.seed);
  const auto results = track_all(system, start, opts, progress);
  SolutionSet set = collect_solutions(results, opts);
  set.bezout = bezout;
  if (set.solutions.empty())
    throw AllPathsFailedError("all " + std::to_string(bezout) + " paths failed (" +
                              std::to_string(set.diverged_count) + " diverged, " + std::to_string(set.failed_count) +
                              " failed)");
  return set;
}

}  // namespace reachkit
