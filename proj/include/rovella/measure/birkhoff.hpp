#pragma once

#include <cmath>
#include <cstddef>

#include "rovella/core/errors.hpp"
#include "rovella/measure/density.hpp"
#include "rovella/measure/orbit.hpp"

namespace rovella {

struct BirkhoffAverage {
  double value = 0.0;
  std::size_t count = 0;
  bool partial = false;  // orbit was truncated; value averages the samples present
};

/// (1/N) sum phi(x_i) over the kept samples.
template <class State, class Phi>
BirkhoffAverage birkhoff_average(const Orbit<State>& orbit, Phi&& phi) {
  BirkhoffAverage out;
  out.partial = orbit.truncated;
  out.count = orbit.samples.size();
  if (out.count == 0) throw DomainError("birkhoff_average: empty orbit");
  double sum = 0.0, comp = 0.0;  // Kahan summation; orbits reach 10^7 terms
  for (const auto& x : orbit.samples) {
    const double y = phi(x) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  out.value = sum / static_cast<double>(out.count);
  return out;
}

/// Orbit mode: Birkhoff average of -log|x|.
template <class State>
BirkhoffAverage log_integral(const Orbit<State>& orbit) {
  return birkhoff_average(orbit, [](const State& s) { return -std::log(std::abs(x_of(s))); });
}

namespace detail {
/// Integral of -log t over [0, b], b >= 0: b - b log b.
inline double neg_log_antiderivative(double b) { return b > 0.0 ? b - b * std::log(b) : 0.0; }

/// Integral of -log|x| over [a, b].
inline double neg_log_abs_integral(double a, double b) {
  if (a >= 0.0) return neg_log_antiderivative(b) - neg_log_antiderivative(a);
  if (b <= 0.0) return neg_log_antiderivative(-a) - neg_log_antiderivative(-b);
  return neg_log_antiderivative(-a) + neg_log_antiderivative(b);
}
}  // namespace detail

/// Density mode: sum_i w_i * (mean of -log|x| over bin i), treating the
/// density as constant on each bin. The bin means use the exact
/// antiderivative, so the bin containing 0 is finite.
inline double log_integral(const DensityEstimate& d) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double a = d.bin_lo(i), b = d.bin_hi(i);
    total += d.weights[i] * detail::neg_log_abs_integral(a, b) / (b - a);
  }
  return total;
}

}  // namespace rovella
