#pragma once

#include <stdexcept>
#include <string>

namespace chiral {

// Root of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed an out-of-range parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A special-function argument fell outside the validity region of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Measure-zero input (exact zero pivot, coincident points); resample.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// Iterative solver did not converge, or produced a structurally impossible result.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Eigenvalue configuration violates the ordering / symmetry of its stratum.
class InvalidConfiguration : public Error {
 public:
  using Error::Error;
};

// Reconstruction produced data that disagrees with itself (negative weight, bad sum).
class Inconsistency : public Error {
 public:
  using Error::Error;
};

// Quadrature exhausted its subdivision budget; carries the best estimate.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

// Malformed input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace chiral
