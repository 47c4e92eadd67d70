#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reachkit/errors.hpp"
#include "reachkit/polynomial.hpp"
#include "reachkit/system.hpp"

namespace reachkit {

namespace detail {

// Recursive-descent parser over one expression line. Everything is expanded
// into canonical form as it is parsed.
//
//   equation := expr ('=' expr)?
//   expr     := term (('+' | '-') term)*
//   term     := unary ('*' unary)*
//   unary    := ('+' | '-') unary | power
//   power    := primary ('^' integer)?
//   primary  := number | identifier | '(' expr ')'
//
// A number directly followed by 'i' is an imaginary literal ("2.5i").
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::size_t line, const std::unordered_map<std::string, std::size_t>& vars,
                   std::size_t nvars)
      : text_(text), line_(line), vars_(vars), nvars_(nvars) {}

  Polynomial parse_equation() {
    Polynomial lhs = parse_expr();
    skip_space();
    if (peek() == '=') {
      ++pos_;
      Polynomial rhs = parse_expr();
      lhs -= rhs;
    }
    skip_space();
    if (pos_ < text_.size()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return lhs;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, pos_ + 1, what); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  Polynomial parse_expr() {
    Polynomial acc = parse_term();
    for (;;) {
      skip_space();
      const char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      Polynomial rhs = parse_term();
      if (c == '+')
        acc += rhs;
      else
        acc -= rhs;
    }
  }

  Polynomial parse_term() {
    Polynomial acc = parse_unary();
    for (;;) {
      skip_space();
      if (peek() != '*') return acc;
      ++pos_;
      acc *= parse_unary();
    }
  }

  Polynomial parse_unary() {
    skip_space();
    if (peek() == '-') {
      ++pos_;
      return -parse_unary();
    }
    if (peek() == '+') {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  Polynomial parse_power() {
    Polynomial base = parse_primary();
    skip_space();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_ || peek() == '.' || peek() == 'e' || peek() == 'E') {
      pos_ = start;
      fail("exponent must be a non-negative integer");
    }
    std::uint32_t e = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, e);
    if (ec != std::errc{}) {
      pos_ = start;
      fail("exponent out of range");
    }
    return pow(base, e);
  }

  Polynomial parse_primary() {
    skip_space();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial inner = parse_expr();
      skip_space();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      auto it = vars_.find(name);
      if (it == vars_.end()) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      return Polynomial::variable(nvars_, it->second);
    }
    if (c == '\0') fail("unexpected end of expression");
    fail(std::string("unexpected character '") + c + "'");
  }

  Polynomial parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (peek() == '.') {
      ++pos_;
      digits();
    }
    if (peek() == 'e' || peek() == 'E') {
      const std::size_t mark = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        pos_ = mark;
      else
        digits();
    }
    const std::string literal(text_.substr(start, pos_ - start));
    if (literal == ".") {
      pos_ = start;
      fail("malformed number");
    }
    const double value = std::strtod(literal.c_str(), nullptr);
    if (peek() == 'i' && !(pos_ + 1 < text_.size() &&
                           (std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '_'))) {
      ++pos_;
      return Polynomial::constant(nvars_, Complex{0.0, value});
    }
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')
      fail("implicit multiplication is not allowed; write '*'");
    return Polynomial::constant(nvars_, Complex{value, 0.0});
  }

  std::string_view text_;
  std::size_t line_;
  const std::unordered_map<std::string, std::size_t>& vars_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
};

inline bool valid_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline bool blank(std::string_view s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace detail

/// Parses one expression (or "lhs = rhs" equation) over the given variables.
inline Polynomial parse_polynomial(std::string_view expr, const std::vector<std::string>& var_names,
                                   std::size_t line = 1) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < var_names.size(); ++i) index.emplace(var_names[i], i);
  return detail::ExpressionParser(expr, line, index, var_names.size()).parse_equation();
}

/// Parses a system file: a "vars:" declaration followed by one polynomial
/// expression per non-empty line. '#' starts a comment.
inline PolySystem parse_system(std::string_view text) {
  std::vector<std::string> names;
  std::vector<Polynomial> polys;
  std::unordered_map<std::string, std::size_t> index;
  bool have_vars = false;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    line = detail::strip_comment(line);
    if (detail::blank(line)) {
      if (end == text.size()) break;
      continue;
    }
    if (!have_vars) {
      const auto first = line.find_first_not_of(" \t");
      if (line.substr(first, 5) != "vars:") throw ParseError(line_no, first + 1, "expected 'vars:' declaration");
      std::istringstream in{std::string(line.substr(first + 5))};
      std::string name;
      while (in >> name) {
        if (!detail::valid_identifier(name)) throw ParseError(line_no, 1, "invalid variable name '" + name + "'");
        if (!index.emplace(name, names.size()).second)
          throw ParseError(line_no, 1, "duplicate variable name '" + name + "'");
        names.push_back(name);
      }
      if (names.empty()) throw ParseError(line_no, 1, "no variables declared");
      have_vars = true;
    } else {
      polys.push_back(detail::ExpressionParser(line, line_no, index, names.size()).parse_equation());
    }
    if (end == text.size()) break;
  }
  if (!have_vars) throw ParseError(1, 1, "missing 'vars:' declaration");
  return PolySystem(std::move(names), std::move(polys));
}

/// Prints a system in the file format accepted by parse_system.
inline std::string to_string(const PolySystem& system) {
  std::string out = "vars:";
  for (const auto& n : system.var_names()) out += " " + n;
  out += "\n";
  for (const auto& p : system.polys()) out += to_string(p, system.var_names()) + "\n";
  return out;
}

}  // namespace reachkit
