#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"
#include "rovella/core/params.hpp"

namespace rovella {

/// |x| below this is treated as the discontinuity x = 0.
inline constexpr double kSingularTolerance = 1e-300;
/// Slack on the [-1/2, 1/2] domain check.
inline constexpr double kDomainSlack = 1e-12;

inline bool is_singular(double x) { return std::abs(x) < kSingularTolerance; }

namespace detail {

inline void require_interval_domain(double x, const char* what) {
  if (!(std::abs(x) <= 0.5 + kDomainSlack)) throw DomainError(std::string(what) + ": coordinate outside [-1/2, 1/2]");
}

inline void require_nonsingular(double x, const char* what) {
  if (is_singular(x)) throw SingularPointError(x, std::string(what) + ": singular point x = 0");
}

inline double clamp_half(double v) { return std::clamp(v, -0.5, 0.5); }

}  // namespace detail

/// One-dimensional contracting Lorenz map:
/// T(x) = 1/2 - rho|x|^s for x > 0 and rho|x|^s - 1/2 for x < 0.
inline double eval_T(const RovellaParams& p, double x) {
  detail::require_interval_domain(x, "eval_T");
  detail::require_nonsingular(x, "eval_T");
  const double a = p.rho() * std::pow(std::abs(x), p.s());
  return detail::clamp_half(x > 0.0 ? 0.5 - a : a - 0.5);
}

/// Closed-form derivatives of T of order 1, 2 or 3.
inline double eval_T_deriv(const RovellaParams& p, double x, int order) {
  detail::require_nonsingular(x, "eval_T_deriv");
  const double s = p.s();
  const double ax = std::abs(x);
  const double sgn = x > 0.0 ? 1.0 : -1.0;
  switch (order) {
    case 1:
      return -p.rho() * s * std::pow(ax, s - 1.0);
    case 2:
      return -sgn * p.rho() * s * (s - 1.0) * std::pow(ax, s - 2.0);
    case 3:
      return -p.rho() * s * (s - 1.0) * (s - 2.0) * std::pow(ax, s - 3.0);
    default:
      throw DomainError("eval_T_deriv: order must be 1, 2 or 3");
  }
}

/// S(T) = T'''/T' - (3/2)(T''/T')^2, from the closed-form derivatives.
inline double schwarzian(const RovellaParams& p, double x) {
  const double d1 = eval_T_deriv(p, x, 1);
  const double d2 = eval_T_deriv(p, x, 2);
  const double d3 = eval_T_deriv(p, x, 3);
  const double q = d2 / d1;
  return d3 / d1 - 1.5 * q * q;
}

/// Fiber map G(x, y) = y|x|^r + c0 (x > 0), -y|x|^r + c1 (x < 0).
inline double eval_G(const RovellaParams& p, double x, double y) {
  detail::require_nonsingular(x, "eval_G");
  const double a = y * std::pow(std::abs(x), p.r());
  return x > 0.0 ? a + p.c0() : -a + p.c1();
}

/// dG/dx = r y |x|^(r-1) on both branches.
inline double eval_G_dx(const RovellaParams& p, double x, double y) {
  detail::require_nonsingular(x, "eval_G_dx");
  return p.r() * y * std::pow(std::abs(x), p.r() - 1.0);
}

/// dG/dy = +-|x|^r.
inline double eval_G_dy(const RovellaParams& p, double x) {
  detail::require_nonsingular(x, "eval_G_dy");
  const double a = std::pow(std::abs(x), p.r());
  return x > 0.0 ? a : -a;
}

/// Two-dimensional Poincare map F(x, y) = (T(x), G(x, y)).
inline PointQ eval_F(const RovellaParams& p, const PointQ& q) {
  detail::require_interval_domain(q.x, "eval_F");
  detail::require_interval_domain(q.y, "eval_F");
  detail::require_nonsingular(q.x, "eval_F");
  const double ax = std::abs(q.x);
  const double a = p.rho() * std::pow(ax, p.s());
  const double b = q.y * std::pow(ax, p.r());
  if (q.x > 0.0) return {detail::clamp_half(0.5 - a), b + p.c0()};
  return {detail::clamp_half(a - 0.5), -b + p.c1()};
}

// ---------------------------------------------------------------------------
// Linearized flow near the singularity and the global return.

/// Transit time from the top section {z = epsilon} to the side sections
/// {x = +-epsilon} of the linear flow: (log eps - log|x|) / lambda1.
inline double return_time_local(const EigenTriple& e, double x, double epsilon = 1.0) {
  if (is_singular(x)) throw SingularPointError(x, "return_time_local: x = 0 never leaves the cube");
  if (!(epsilon > 0.0) || std::abs(x) > epsilon * (1.0 + kDomainSlack)) {
    throw DomainError("return_time_local: requires 0 < |x| <= epsilon");
  }
  return std::max(0.0, (std::log(epsilon) - std::log(std::abs(x))) / e.lambda1);
}

/// Exit point on {x = +-epsilon} of the orbit of the linear field
/// (lambda1 x, lambda2 y, lambda3 z) started at a point of {z = epsilon}.
/// For epsilon = 1 and x > 0 this is (1, y x^r, x^s).
inline FlowState local_flow_map(const EigenTriple& e, const FlowState& top, double epsilon = 1.0) {
  if (std::abs(top.z - epsilon) > kDomainSlack * std::max(1.0, epsilon)) {
    throw DomainError("local_flow_map: state not on the top section z = epsilon");
  }
  if (is_singular(top.x)) throw SingularPointError(top.x, "local_flow_map: x = 0 lies on the stable manifold");
  if (std::abs(top.x) > epsilon * (1.0 + kDomainSlack)) throw DomainError("local_flow_map: requires |x| <= epsilon");
  const double ratio = std::min(1.0, std::abs(top.x) / epsilon);
  const double sign = top.x > 0.0 ? 1.0 : -1.0;
  FlowState out;
  out.x = sign * epsilon;
  out.y = top.y * std::pow(ratio, e.r());
  out.z = epsilon * std::pow(ratio, e.s());
  out.t = top.t + return_time_local(e, top.x, epsilon);
  return out;
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// R_+ (sign > 0) or R_- (sign < 0): swaps x and z with the branch sign.
inline Matrix3 rotation_matrix(int sign) {
  const double s = sign > 0 ? 1.0 : -1.0;
  return {{{0.0, 0.0, s}, {0.0, 1.0, 0.0}, {s, 0.0, 0.0}}};
}

/// E_rho = diag(rho, 1, 1).
inline Matrix3 expansion_matrix(double rho) { return {{{rho, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}; }

inline std::array<double, 3> mat_vec(const Matrix3& m, const std::array<double, 3>& v) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return out;
}

/// Flow outside the cube from the side section x = +-1 back to Q:
/// R_+- then E_rho then the affine placement
/// (u, v) -> (1/2 - u, v + c0) on the + side, (-1/2 - u, -v + c1) on the - side.
inline PointQ global_return(const RovellaParams& p, const FlowState& side) {
  if (std::abs(std::abs(side.x) - 1.0) > kDomainSlack) throw DomainError("global_return: point not on a side section x = +-1");
  const int sign = side.x > 0.0 ? 1 : -1;
  const auto rotated = mat_vec(rotation_matrix(sign), {side.x, side.y, side.z});
  const auto expanded = mat_vec(expansion_matrix(p.rho()), rotated);
  if (sign > 0) return {detail::clamp_half(0.5 - expanded[0]), expanded[1] + p.c0()};
  return {detail::clamp_half(-0.5 - expanded[0]), -expanded[1] + p.c1()};
}

/// delta-truncated distance: |x - y| when |x - y| <= delta, otherwise 1.
inline double truncated_distance(double delta, double x, double y) {
  if (!(delta > 0.0)) throw DomainError("truncated_distance: delta must be positive");
  const double d = std::abs(x - y);
  return d <= delta ? d : 1.0;
}

// ---------------------------------------------------------------------------
// Map objects consumed by the generic measure and statistics code.
// Each provides state_type, operator(), id() and sample_reference(rng),
// which draws from the reference (Lebesgue) measure on the domain.

class RovellaBaseMap {
 public:
  using state_type = double;
  explicit RovellaBaseMap(RovellaParams p) : p_(std::move(p)) {}

  double operator()(double x) const { return eval_T(p_, x); }
  double log_abs_derivative(double x) const { return std::log(std::abs(eval_T_deriv(p_, x, 1))); }
  Interval domain() const { return {-0.5, 0.5}; }
  std::vector<double> discontinuities() const { return {0.0}; }
  std::string id() const { return "rovella_T"; }
  const RovellaParams& params() const { return p_; }

  template <class Rng>
  double sample_reference(Rng& rng) const {
    return rng.uniform(-0.5, 0.5);
  }

 private:
  RovellaParams p_;
};

class RovellaSkewMap {
 public:
  using state_type = PointQ;
  explicit RovellaSkewMap(RovellaParams p) : p_(std::move(p)) {}

  PointQ operator()(const PointQ& q) const { return eval_F(p_, q); }
  std::string id() const { return "rovella_F"; }
  const RovellaParams& params() const { return p_; }

  template <class Rng>
  PointQ sample_reference(Rng& rng) const {
    const double x = rng.uniform(-0.5, 0.5);
    return {x, rng.uniform(-0.5, 0.5)};
  }

 private:
  RovellaParams p_;
};

/// x -> 2x mod 1 on [0, 1); Lebesgue measure is invariant.
class DoublingMap {
 public:
  using state_type = double;
  double operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("doubling map: x outside [0, 1]");
    const double y = 2.0 * x;
    return y >= 1.0 ? y - 1.0 : y;
  }
  double log_abs_derivative(double) const { return std::log(2.0); }
  Interval domain() const { return {0.0, 1.0}; }
  std::vector<double> discontinuities() const { return {0.5}; }
  std::string id() const { return "doubling"; }

  template <class Rng>
  double sample_reference(Rng& rng) const {
    return rng.uniform01();
  }
};

class IdentityMap {
 public:
  using state_type = double;
  explicit IdentityMap(Interval dom = {0.0, 1.0}) : dom_(dom) {}
  double operator()(double x) const { return x; }
  Interval domain() const { return dom_; }
  std::vector<double> discontinuities() const { return {}; }
  std::string id() const { return "identity"; }

  template <class Rng>
  double sample_reference(Rng& rng) const {
    return rng.uniform(dom_.lo, dom_.hi);
  }

 private:
  Interval dom_;
};

}  // namespace rovella
