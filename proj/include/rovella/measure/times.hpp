#pragma once

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/rovella_map.hpp"
#include "rovella/measure/orbit.hpp"

namespace rovella {

/// Integer time evaluated on a finite orbit. A censored time equals the orbit
/// length and means "not certified within the orbit".
struct CensoredTime {
  std::size_t value = 0;
  bool censored = false;
};

/// Smallest N >= 1 such that the running averages (1/n) sum_{i<n} terms[i]
/// satisfy `ok` for every n in [N, length].
template <class Ok>
CensoredTime first_stable_time(std::span<const double> terms, Ok&& ok) {
  if (terms.empty()) throw DomainError("first_stable_time: orbit of length >= 1 required");
  std::size_t last_bad = 0;
  double sum = 0.0;
  for (std::size_t n = 1; n <= terms.size(); ++n) {
    sum += terms[n - 1];
    if (!ok(sum / static_cast<double>(n))) last_bad = n;
  }
  if (last_bad == terms.size()) return {terms.size(), true};
  return {last_bad + 1, false};
}

/// Expansion time: averages of log|T'(x_i)| stay above c from N on.
inline CensoredTime expansion_time(std::span<const double> log_derivatives, double c) {
  return first_stable_time(log_derivatives, [c](double avg) { return avg > c; });
}

inline CensoredTime expansion_time(const Orbit<double>& orbit, const RovellaBaseMap& map, double c) {
  std::vector<double> terms;
  terms.reserve(orbit.samples.size());
  for (double x : orbit.samples) terms.push_back(map.log_abs_derivative(x));
  return expansion_time(terms, c);
}

/// Recurrence time: averages of -log d_delta(x_i, 0) stay at or below eps from N on.
inline CensoredTime recurrence_time(std::span<const double> xs, double delta, double eps) {
  std::vector<double> terms;
  terms.reserve(xs.size());
  for (double x : xs) terms.push_back(-std::log(truncated_distance(delta, x, 0.0)));
  return first_stable_time(terms, [eps](double avg) { return avg <= eps; });
}

inline CensoredTime recurrence_time(const Orbit<double>& orbit, double delta, double eps) {
  return recurrence_time(std::span<const double>(orbit.samples), delta, eps);
}

struct TimePair {
  CensoredTime expansion;
  CensoredTime recurrence;
};

/// Fraction of the ensemble in the tail set at time n: E > n or R > n.
/// Censored times count as exceeding every n.
inline double tail_fraction(std::span<const TimePair> ensemble, std::size_t n) {
  if (ensemble.empty()) return 0.0;
  std::size_t k = 0;
  for (const auto& p : ensemble) {
    const bool e = p.expansion.censored || p.expansion.value > n;
    const bool r = p.recurrence.censored || p.recurrence.value > n;
    if (e || r) ++k;
  }
  return static_cast<double>(k) / static_cast<double>(ensemble.size());
}

}  // namespace rovella

namespace rovella {

struct TimeEnsembleConfig {
  std::size_t orbits = 10000;
  std::size_t length = 10000;
  double c = 0.0;  // expansion threshold
  double delta = 0.005;
  double eps = 0.1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// (E, R) for orbits started at Lebesgue-random points, orbit k on stream (seed, k).
inline std::vector<TimePair> time_ensemble(const RovellaBaseMap& map, const TimeEnsembleConfig& cfg) {
  std::vector<TimePair> out(cfg.orbits);
  const std::size_t tasks = std::min<std::size_t>(cfg.orbits, 256);
  parallel_for(tasks, cfg.threads, [&](std::size_t t) {
    const auto [lo, hi] = chunk_bounds(cfg.orbits, tasks, t);
    for (std::size_t k = lo; k < hi; ++k) {
      const auto orbit = random_orbit(map, cfg.length, 0, derive_seed(cfg.seed, k));
      out[k] = {expansion_time(orbit, map, cfg.c), recurrence_time(orbit, cfg.delta, cfg.eps)};
    }
  });
  return out;
}

}  // namespace rovella
