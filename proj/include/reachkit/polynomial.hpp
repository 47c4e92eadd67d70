#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reachkit/errors.hpp"

namespace reachkit {

using Complex = std::complex<double>;
using Exponents = std::vector<std::uint32_t>;

/// Degree reported for the zero polynomial.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

/// Terms smaller than this fraction of the largest coefficient are dropped
/// after every arithmetic operation.
inline constexpr double kCoefficientCleanup = 1e-14;

struct Monomial {
  Complex coeff;
  Exponents exponents;
};

inline std::uint32_t total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

/// Graded lexicographic order: higher total degree first, ties broken
/// lexicographically (x0 > x1 > ...).
inline bool grlex_greater(const Exponents& a, const Exponents& b) {
  const auto da = total_degree(a);
  const auto db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

/// Expanded multivariate polynomial with complex coefficients. Terms are kept
/// sorted in descending grlex order with no repeated exponent vectors and no
/// zero coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, Complex c) {
    Polynomial p(nvars);
    if (c != Complex{}) p.terms_.push_back({c, Exponents(nvars, 0)});
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw DimensionError("variable index out of range");
    Exponents e(nvars, 0);
    e[index] = 1;
    Polynomial p(nvars);
    p.terms_.push_back({Complex{1.0, 0.0}, std::move(e)});
    return p;
  }

  /// Builds the canonical form from an arbitrary (unsorted, possibly
  /// repeated) term list.
  static Polynomial from_terms(std::size_t nvars, std::vector<Monomial> terms) {
    for (const auto& t : terms) {
      if (t.exponents.size() != nvars) throw DimensionError("monomial exponent length does not match nvars");
      if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
        throw DimensionError("non-finite coefficient");
    }
    Polynomial p(nvars);
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  int degree() const noexcept {
    // terms_ are grlex-sorted, so the first term has the largest total degree
    return terms_.empty() ? kZeroDegree : static_cast<int>(total_degree(terms_.front().exponents));
  }

  /// Largest exponent of one variable.
  std::uint32_t degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exponents.at(var));
    return d;
  }

  bool is_constant() const noexcept { return terms_.empty() || degree() == 0; }

  double max_coeff_abs() const noexcept {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
    return m;
  }

  Complex evaluate(std::span<const Complex> point) const {
    if (point.size() != nvars_) throw DimensionError("evaluation point has wrong dimension");
    Complex sum{};
    for (const auto& t : terms_) {
      Complex v = t.coeff;
      for (std::size_t j = 0; j < nvars_; ++j)
        for (std::uint32_t k = 0; k < t.exponents[j]; ++k) v *= point[j];
      sum += v;
    }
    return sum;
  }

  /// Sum of |c * x^e| over all terms: the magnitude a floating-point
  /// evaluation at `point` has to resolve.
  double evaluation_scale(std::span<const Complex> point) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
      double v = std::abs(t.coeff);
      for (std::size_t j = 0; j < nvars_; ++j) v *= std::pow(std::abs(point[j]), t.exponents[j]);
      sum += v;
    }
    return sum;
  }

  Polynomial differentiate(std::size_t var) const {
    if (var >= nvars_) throw DimensionError("differentiation index out of range");
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (t.exponents[var] == 0) continue;
      Monomial m{t.coeff * static_cast<double>(t.exponents[var]), t.exponents};
      --m.exponents[var];
      out.push_back(std::move(m));
    }
    Polynomial p(nvars_);
    p.terms_ = std::move(out);
    p.canonicalize();
    return p;
  }

  Polynomial operator-() const {
    Polynomial p = *this;
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_same(a, b);
    std::vector<Monomial> out;
    out.reserve(a.terms_.size() + b.terms_.size());
    out.insert(out.end(), a.terms_.begin(), a.terms_.end());
    out.insert(out.end(), b.terms_.begin(), b.terms_.end());
    Polynomial p(a.nvars_);
    p.terms_ = std::move(out);
    p.canonicalize();
    return p;
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_same(a, b);
    std::vector<Monomial> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        Monomial m{ta.coeff * tb.coeff, ta.exponents};
        for (std::size_t j = 0; j < a.nvars_; ++j) m.exponents[j] += tb.exponents[j];
        out.push_back(std::move(m));
      }
    }
    Polynomial p(a.nvars_);
    p.terms_ = std::move(out);
    p.canonicalize();
    return p;
  }

  friend Polynomial operator*(Complex s, const Polynomial& a) {
    Polynomial p = a;
    for (auto& t : p.terms_) t.coeff *= s;
    p.canonicalize();
    return p;
  }
  friend Polynomial operator*(const Polynomial& a, Complex s) { return s * a; }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].coeff != b.terms_[i].coeff || a.terms_[i].exponents != b.terms_[i].exponents) return false;
    return true;
  }

 private:
  static void check_same(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw DimensionError("polynomials have different variable counts");
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Monomial& x, const Monomial& y) { return grlex_greater(x.exponents, y.exponents); });
    // The cutoff is relative to the largest contribution before merging, so
    // that cancellation leaves no rounding dust behind.
    double cmax = 0.0;
    for (const auto& t : terms_) cmax = std::max(cmax, std::abs(t.coeff));
    std::vector<Monomial> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().exponents == t.exponents)
        merged.back().coeff += t.coeff;
      else
        merged.push_back(std::move(t));
    }
    const double cutoff = kCoefficientCleanup * cmax;
    std::erase_if(merged, [cutoff](const Monomial& t) { return t.coeff == Complex{} || std::abs(t.coeff) < cutoff; });
    terms_ = std::move(merged);
  }

  std::size_t nvars_ = 0;
  std::vector<Monomial> terms_;
};

inline Polynomial pow(const Polynomial& base, std::uint32_t exponent) {
  Polynomial result = Polynomial::constant(base.nvars(), 1.0);
  Polynomial b = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent > 0) b *= b;
  }
  return result;
}

/// Re-expresses `p` over a larger variable list: variable j of `p` becomes
/// variable var_map[j] of the result.
inline Polynomial embed(const Polynomial& p, std::size_t nvars, std::span<const std::size_t> var_map) {
  if (var_map.size() != p.nvars()) throw DimensionError("variable map has wrong length");
  std::vector<Monomial> terms;
  terms.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    Monomial m{t.coeff, Exponents(nvars, 0)};
    for (std::size_t j = 0; j < p.nvars(); ++j) {
      if (var_map[j] >= nvars) throw DimensionError("variable map target out of range");
      m.exponents[var_map[j]] += t.exponents[j];
    }
    terms.push_back(std::move(m));
  }
  return Polynomial::from_terms(nvars, std::move(terms));
}

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Prints `p` in the system-file expression syntax. The output parses back to
/// exactly the same polynomial.
inline std::string to_string(const Polynomial& p, const std::vector<std::string>& names) {
  if (names.size() != p.nvars()) throw DimensionError("variable name count does not match nvars");
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool has_vars = total_degree(t.exponents) > 0;
    std::string coeff;
    bool negative = false;
    if (t.coeff.imag() == 0.0) {
      double re = t.coeff.real();
      negative = re < 0;
      re = std::abs(re);
      if (!(has_vars && re == 1.0)) coeff = detail::format_double(re);
    } else {
      coeff = "(" + detail::format_double(t.coeff.real()) + (t.coeff.imag() < 0 ? "-" : "+") +
              detail::format_double(std::abs(t.coeff.imag())) + "i)";
    }
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t j = 0; j < p.nvars(); ++j) {
      if (t.exponents[j] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[j];
      if (t.exponents[j] > 1) mono += "^" + std::to_string(t.exponents[j]);
    }
    if (!coeff.empty() && !mono.empty())
      out += coeff + "*" + mono;
    else
      out += coeff + mono;
  }
  return out;
}

}  // namespace reachkit
