#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lagcalc {

/// Base class for every error raised by the library. `precondition()` names
/// the violated contract so front ends can report it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(std::string precondition, const std::string& what)
      : std::runtime_error(what), precondition_(std::move(precondition)) {}

  const std::string& precondition() const noexcept { return precondition_; }

 private:
  std::string precondition_;
};

/// Shapes or lengths that do not agree with the owning object.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain (negative index, R outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// B^tau has (numerically) vanishing eigenvalue magnitudes.
class DegenerateTau : public Error {
 public:
  DegenerateTau(std::vector<int> indices, const std::string& what)
      : Error("non-degenerate tau", what), indices_(std::move(indices)) {}

  /// 0-based indices j with mu_j below the degeneracy threshold.
  const std::vector<int>& indices() const noexcept { return indices_; }

 private:
  std::vector<int> indices_;
};

/// Frame continuation could not pair old and new eigenvectors unambiguously.
class AmbiguousMatching : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse, misaligned, or incompatible with a requested frequency.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (group JSON, field container).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace lagcalc
