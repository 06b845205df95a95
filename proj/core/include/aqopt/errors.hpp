#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "aqopt/types.hpp"

namespace aqopt {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Wrong argument shape or value at an API boundary.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input fails a numerical validity check (non-Hermitian operator, non-unit
// state norm, non-finite samples, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Spectrum too close to degenerate for an operation that divides by the gap.
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

// Operation is implemented only for the one-qubit x/z model.
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

// A closed form valid only at an objective optimum was requested away from one.
class NotAtOptimumError : public Error {
 public:
  using Error::Error;
};

// Shooting/bracketing failed to enclose a solution.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

// An ODE right-hand side produced a value outside its admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration (unknown keys, bad values, bad pairings).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite value encountered during iteration; carries the offending
// iterate so callers can inspect or persist it.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double horizon, RealMatrix iterate)
      : Error(what), horizon_(horizon), iterate_(std::move(iterate)) {}

  double horizon() const { return horizon_; }
  const RealMatrix& iterate() const { return iterate_; }

 private:
  double horizon_;
  RealMatrix iterate_;
};

}  // namespace aqopt
