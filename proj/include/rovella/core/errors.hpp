#pragma once

#include <stdexcept>
#include <string>

namespace rovella {

/// Raised when parameters or configuration violate a documented invariant.
/// The message names the first violated invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an operation (e.g. |x| > 1/2).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at the discontinuity x = 0 of the contracting Lorenz map.
/// Orbit code catches this to censor or truncate explicitly.
class SingularPointError : public std::domain_error {
 public:
  explicit SingularPointError(double x, const std::string& what = "singular point x = 0")
      : std::domain_error(what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A least-squares fit could not be formed (window collapsed, too few points).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked mathematical inequality failed on concrete data.
class PropertyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rovella
