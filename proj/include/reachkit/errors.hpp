#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reachkit {

/// Base of every error thrown by the library. `kind()` is a stable
/// machine-readable tag; `numerical()` separates bad input from solver
/// outcomes (the CLI maps these to exit codes 1 and 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
  virtual bool numerical() const noexcept { return false; }
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  const char* kind() const noexcept override { return "ParseError"; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DimensionError"; }
};

class NonSquareSystemError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NonSquareSystem"; }
};

class ZeroPolynomialError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ZeroPolynomial"; }
};

/// The variety does not have the shape an operation assumes
/// (e.g. s + dim M != n for slicing, or a constant curve polynomial).
class ShapeError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ShapeError"; }
};

class SingularJacobianError : public Error {
 public:
  SingularJacobianError(double condition)
      : Error("Jacobian is singular (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}
  const char* kind() const noexcept override { return "SingularJacobian"; }
  bool numerical() const noexcept override { return true; }
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class AllPathsFailedError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "AllPathsFailed"; }
  bool numerical() const noexcept override { return true; }
};

/// Solutions of a geometric system are not isolated (circle-like symmetry).
class DegenerateError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "Degenerate"; }
  bool numerical() const noexcept override { return true; }
};

class NoRealSolutionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NoRealSolution"; }
  bool numerical() const noexcept override { return true; }
};

}  // namespace reachkit
