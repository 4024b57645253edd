#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/measure/ulam.hpp"

namespace rovella {

/// Bin weights of an invariant probability vector of an Ulam operator.
struct DensityEstimate {
  std::size_t n = 0;
  Interval domain{};
  std::vector<double> weights;  // probability mass per bin
  double residual = 0.0;        // ||v P - v||_1
  std::size_t iterations = 0;

  double bin_lo(std::size_t i) const { return domain.lo + domain.length() * static_cast<double>(i) / static_cast<double>(n); }
  double bin_hi(std::size_t i) const { return i + 1 == n ? domain.hi : bin_lo(i + 1); }

  /// Exact uniform density on `n` bins.
  static DensityEstimate uniform(std::size_t n, Interval domain) {
    DensityEstimate d;
    d.n = n;
    d.domain = domain;
    d.weights.assign(n, 1.0 / static_cast<double>(n));
    return d;
  }
};

namespace detail {
inline double l1_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}
inline void normalize_l1(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
}
}  // namespace detail

/// Left fixed vector v = v P by power iteration from the uniform vector.
/// Throws ConvergenceError carrying the last residual after max_iter steps.
inline DensityEstimate invariant_density(const UlamOperator& U, double tol = 1e-12, std::size_t max_iter = 100000) {
  if (U.n == 0 || U.row_ptr.size() != U.n + 1) throw ValidationError("invariant_density: malformed operator");
  DensityEstimate d;
  d.n = U.n;
  d.domain = U.domain;
  std::vector<double> v(U.n, 1.0 / static_cast<double>(U.n)), w;
  double res = 0.0;
  for (std::size_t it = 0; it <= max_iter; ++it) {
    U.left_multiply(v, w);
    res = detail::l1_diff(w, v);
    if (res <= tol) {
      d.weights = v;
      d.residual = res;
      d.iterations = it;
      return d;
    }
    detail::normalize_l1(w);
    v.swap(w);
  }
  throw ConvergenceError("invariant_density: no convergence within max_iter", res);
}

}  // namespace rovella
