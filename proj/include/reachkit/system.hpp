#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reachkit/errors.hpp"
#include "reachkit/polynomial.hpp"

namespace reachkit {

/// A list of polynomials over a shared, ordered list of variable names.
class PolySystem {
 public:
  PolySystem() = default;
  PolySystem(std::vector<std::string> var_names, std::vector<Polynomial> polys)
      : var_names_(std::move(var_names)), polys_(std::move(polys)) {
    if (var_names_.empty()) throw DimensionError("system needs at least one variable");
    std::set<std::string> seen(var_names_.begin(), var_names_.end());
    if (seen.size() != var_names_.size()) throw DimensionError("duplicate variable name");
    for (const auto& p : polys_)
      if (p.nvars() != var_names_.size()) throw DimensionError("polynomial variable count does not match system");
  }

  const std::vector<std::string>& var_names() const noexcept { return var_names_; }
  const std::vector<Polynomial>& polys() const noexcept { return polys_; }
  const Polynomial& operator[](std::size_t i) const { return polys_.at(i); }
  std::size_t nvars() const noexcept { return var_names_.size(); }
  std::size_t size() const noexcept { return polys_.size(); }
  bool is_square() const noexcept { return nvars() == size(); }

  std::vector<int> degrees() const {
    std::vector<int> d;
    d.reserve(polys_.size());
    for (const auto& p : polys_) d.push_back(p.degree());
    return d;
  }

  /// Largest coefficient magnitude over all polynomials.
  double scale() const noexcept {
    double m = 0.0;
    for (const auto& p : polys_) m = std::max(m, p.max_coeff_abs());
    return m;
  }

  std::vector<Complex> evaluate(std::span<const Complex> point) const {
    std::vector<Complex> v;
    v.reserve(polys_.size());
    for (const auto& p : polys_) v.push_back(p.evaluate(point));
    return v;
  }

  /// ||F(point)||_inf
  double residual(std::span<const Complex> point) const {
    double r = 0.0;
    for (const auto& p : polys_) r = std::max(r, std::abs(p.evaluate(point)));
    return r;
  }

  double residual(std::span<const double> point) const {
    std::vector<Complex> z(point.begin(), point.end());
    return residual(std::span<const Complex>(z));
  }

  /// Concatenates the equations of two systems over the same variables.
  friend PolySystem concat(const PolySystem& a, const PolySystem& b) {
    if (a.var_names_ != b.var_names_) throw DimensionError("systems have different variables");
    auto polys = a.polys_;
    polys.insert(polys.end(), b.polys_.begin(), b.polys_.end());
    return PolySystem(a.var_names_, std::move(polys));
  }

 private:
  std::vector<std::string> var_names_;
  std::vector<Polynomial> polys_;
};

using PolyMatrix = std::vector<std::vector<Polynomial>>;

/// Row i, column j holds d f_i / d x_j.
inline PolyMatrix jacobian(const PolySystem& system) {
  PolyMatrix jac;
  jac.reserve(system.size());
  for (const auto& p : system.polys()) {
    std::vector<Polynomial> row;
    row.reserve(system.nvars());
    for (std::size_t j = 0; j < system.nvars(); ++j) row.push_back(p.differentiate(j));
    jac.push_back(std::move(row));
  }
  return jac;
}

/// Product of the total degrees of a square system.
inline std::uint64_t bezout_number(const PolySystem& system) {
  if (!system.is_square())
    throw NonSquareSystemError("system has " + std::to_string(system.size()) + " equations in " +
                               std::to_string(system.nvars()) + " variables");
  std::uint64_t total = 1;
  for (const auto& p : system.polys()) {
    if (p.is_zero()) throw ZeroPolynomialError("system contains the zero polynomial");
    const auto d = static_cast<std::uint64_t>(p.degree());
    if (d != 0 && total > std::numeric_limits<std::uint64_t>::max() / d)
      throw std::overflow_error("Bezout number overflows 64 bits");
    total *= d;
  }
  return total;
}

/// Flattened form of a system for repeated evaluation of values and
/// Jacobians. Every polynomial and every non-zero partial derivative becomes
/// a run of terms whose factors index straight into a table of powers.
class CompiledSystem {
 public:
  /// Scratch buffers for one evaluating thread.
  struct Workspace {
    std::vector<Complex> powers;
  };

  CompiledSystem() = default;
  explicit CompiledSystem(const PolySystem& system) : nvars_(system.nvars()), neqs_(system.size()) {
    max_exp_.assign(nvars_, 0);
    for (const auto& p : system.polys())
      for (std::size_t j = 0; j < nvars_; ++j) max_exp_[j] = std::max(max_exp_[j], p.degree_in(j));
    power_offset_.assign(nvars_ + 1, 0);
    for (std::size_t j = 0; j < nvars_; ++j) power_offset_[j + 1] = power_offset_[j] + max_exp_[j] + 1;
    for (std::size_t i = 0; i < neqs_; ++i) {
      const Polynomial& p = system[i];
      row_norms_.push_back(p.max_coeff_abs());
      value_slots_.push_back(add_terms(p, static_cast<std::uint32_t>(i)));
      for (std::size_t j = 0; j < nvars_; ++j) {
        const Polynomial d = p.differentiate(j);
        if (!d.is_zero()) jac_slots_.push_back(add_terms(d, static_cast<std::uint32_t>(i * nvars_ + j)));
      }
    }
  }

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t size() const noexcept { return neqs_; }

  Workspace make_workspace() const { return Workspace{std::vector<Complex>(power_offset_.back())}; }

  /// values[i] = f_i(x); when `jac` is non-empty it receives the row-major
  /// size() x nvars() Jacobian.
  void evaluate(std::span<const Complex> x, std::span<Complex> values, std::span<Complex> jac, Workspace& ws) const {
    fill_powers(x, ws);
    for (const Slot& s : value_slots_) values[s.out] = sum_terms(s, ws);
    if (jac.empty()) return;
    std::fill(jac.begin(), jac.end(), Complex{});
    for (const Slot& s : jac_slots_) jac[s.out] = sum_terms(s, ws);
  }

  /// out[i] = sum over terms of |c * x^e| for f_i: the magnitude a
  /// floating-point evaluation of f_i at x has to resolve.
  void evaluation_scales(std::span<const Complex> x, std::span<double> out, Workspace& ws) const {
    fill_powers(x, ws);
    for (const Slot& s : value_slots_) {
      double sum = 0.0;
      for (std::uint32_t k = s.begin; k < s.end; ++k) {
        const Term& t = terms_[k];
        double v = std::hypot(t.re, t.im);
        for (std::uint32_t m = 0; m < t.count; ++m) v *= std::abs(ws.powers[factors_[t.first + m]]);
        sum += v;
      }
      out[s.out] = sum;
    }
  }

  /// Largest coefficient magnitude of each polynomial.
  const std::vector<double>& row_norms() const noexcept { return row_norms_; }

 private:
  struct Term {
    double re;
    double im;
    std::uint32_t first;
    std::uint32_t count;
  };
  struct Slot {
    std::uint32_t out;
    std::uint32_t begin;
    std::uint32_t end;
  };

  Slot add_terms(const Polynomial& p, std::uint32_t out) {
    Slot s{out, static_cast<std::uint32_t>(terms_.size()), 0};
    for (const auto& t : p.terms()) {
      Term ct{t.coeff.real(), t.coeff.imag(), static_cast<std::uint32_t>(factors_.size()), 0};
      for (std::size_t j = 0; j < nvars_; ++j) {
        if (t.exponents[j] == 0) continue;
        factors_.push_back(power_offset_[j] + t.exponents[j]);
        ++ct.count;
      }
      terms_.push_back(ct);
    }
    s.end = static_cast<std::uint32_t>(terms_.size());
    return s;
  }

  Complex sum_terms(const Slot& s, const Workspace& ws) const {
    const Complex* pw = ws.powers.data();
    const std::uint32_t* fac = factors_.data();
    double sr = 0.0, si = 0.0;
    for (std::uint32_t k = s.begin; k < s.end; ++k) {
      const Term& t = terms_[k];
      double re = t.re, im = t.im;
      for (std::uint32_t m = 0; m < t.count; ++m) {
        const Complex p = pw[fac[t.first + m]];
        const double nr = re * p.real() - im * p.imag();
        im = re * p.imag() + im * p.real();
        re = nr;
      }
      sr += re;
      si += im;
    }
    return {sr, si};
  }

  void fill_powers(std::span<const Complex> x, Workspace& ws) const {
    for (std::size_t j = 0; j < nvars_; ++j) {
      Complex* p = ws.powers.data() + power_offset_[j];
      p[0] = 1.0;
      const double xr = x[j].real(), xi = x[j].imag();
      for (std::uint32_t k = 1; k <= max_exp_[j]; ++k)
        p[k] = Complex(p[k - 1].real() * xr - p[k - 1].imag() * xi, p[k - 1].real() * xi + p[k - 1].imag() * xr);
    }
  }

  std::size_t nvars_ = 0;
  std::size_t neqs_ = 0;
  std::vector<Term> terms_;
  std::vector<std::uint32_t> factors_;
  std::vector<Slot> value_slots_;
  std::vector<Slot> jac_slots_;
  std::vector<std::uint32_t> max_exp_;
  std::vector<std::uint32_t> power_offset_;
  std::vector<double> row_norms_;
};

}  // namespace reachkit
