#pragma once

#include <cmath>
#include <string>

#include "rovella/core/errors.hpp"

namespace rovella {

/// Eigenvalues of the linear vector field at the singularity.
struct EigenTriple {
  double lambda1 = 1.0;   // unstable, > 0
  double lambda2 = -5.0;  // strong stable
  double lambda3 = -1.2;  // weak stable

  double r() const { return -lambda2 / lambda1; }
  double s() const { return -lambda3 / lambda1; }
};

/// Unvalidated parameter values, as read from a configuration file.
struct ParamValues {
  EigenTriple eigen{};
  double rho = std::pow(2.0, 1.2);
  double c0 = 0.25;
  double c1 = -0.25;
};

/// Parameters of the contracting Lorenz Poincare map that passed
/// validate_params(). Only validate_params() can construct one.
class RovellaParams {
 public:
  const EigenTriple& eigen() const { return values_.eigen; }
  double rho() const { return values_.rho; }
  double c0() const { return values_.c0; }
  double c1() const { return values_.c1; }
  double r() const { return r_; }
  double s() const { return s_; }
  const ParamValues& values() const { return values_; }

  /// rho (1/2)^s == 1 up to rounding: the map is onto and conjugate to doubling.
  bool is_full_map() const { return std::abs(values_.rho * std::pow(0.5, s_) - 1.0) <= 1e-12; }

 private:
  friend RovellaParams validate_params(const ParamValues& v);
  explicit RovellaParams(const ParamValues& v) : values_(v), r_(v.eigen.r()), s_(v.eigen.s()) {}

  ParamValues values_;
  double r_;
  double s_;
};

/// rho that makes T onto [-1/2, 1/2] (the "full" map) for the given s.
inline double full_map_rho(double s) { return std::pow(2.0, s); }

/// Checks every invariant in order and throws ValidationError naming the
/// first one that fails.
inline RovellaParams validate_params(const ParamValues& v) {
  const auto& e = v.eigen;
  for (double l : {e.lambda1, e.lambda2, e.lambda3, v.rho, v.c0, v.c1}) {
    if (!std::isfinite(l)) throw ValidationError("non-finite parameter value");
  }
  if (!(-e.lambda2 > -e.lambda3 && -e.lambda3 > e.lambda1 && e.lambda1 > 0.0)) {
    throw ValidationError("eigenvalue ordering -lambda2 > -lambda3 > lambda1 > 0 violated");
  }
  const double r = e.r();
  const double s = e.s();
  if (!(r > s + 3.0)) throw ValidationError("r > s+3 violated");
  if (!(v.rho > 0.0)) throw ValidationError("rho > 0 violated");
  if (v.rho * std::pow(0.5, s) > 1.0 + 1e-12) throw ValidationError("rho*(1/2)^s <= 1 violated");

  const double half_width = std::pow(0.5, r + 1.0);
  if (std::abs(v.c0) + half_width > 0.5) throw ValidationError("fiber containment |c0| + (1/2)^(r+1) <= 1/2 violated");
  if (std::abs(v.c1) + half_width > 0.5) throw ValidationError("fiber containment |c1| + (1/2)^(r+1) <= 1/2 violated");
  // closed intervals [c - w, c + w] must not meet
  if (std::abs(v.c0 - v.c1) <= 2.0 * half_width) throw ValidationError("fiber images disjoint violated");
  return RovellaParams(v);
}

/// lambda = (1, -5, -1.2), rho = 2^1.2, c0 = -c1 = 1/4.
inline RovellaParams default_params() { return validate_params(ParamValues{}); }

}  // namespace rovella
