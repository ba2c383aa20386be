#pragma once

#include <stdexcept>
#include <string>

namespace sharpwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the mathematical domain of an operation
/// (negative density, m <= 1, unbounded reaction near the front, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure did not settle. Carries the last measured residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// The time integrator hit a non-finite value, a large undershoot or its step budget.
class NumericalAbort : public Error {
 public:
  NumericalAbort(const std::string& what, double x = 0.0, double t = 0.0)
      : Error(what), x_(x), t_(t) {}
  double x() const noexcept { return x_; }
  double t() const noexcept { return t_; }

 private:
  double x_;
  double t_;
};

/// Malformed or inconsistent configuration / input files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sharpwave
