#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/stats/fit.hpp"

namespace rovella {

/// Hitting times observed at one radius.
struct RadiusSample {
  double r = 0.0;
  std::vector<double> times;
  std::vector<bool> censored;
};

struct LoglawResult {
  ScalingFit fit;                   // log median tau against -log r
  std::vector<double> radii;        // every input radius
  std::vector<double> log_median;   // log of the median time (censored entries at their cap)
  std::vector<bool> used;           // radius entered the fit
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw DomainError("median_of: empty input");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Slope of log(median tau_r) against -log r. A radius is excluded when it
/// has fewer than min_uncensored uncensored times, when half or more of its
/// times are censored, or when its median time is 0.
inline LoglawResult loglaw_exponent(const std::vector<RadiusSample>& samples, std::size_t min_radii = 5,
                                    std::size_t min_uncensored = 10) {
  LoglawResult out;
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    if (!(s.r > 0.0)) throw DomainError("loglaw_exponent: radii must be positive");
    if (s.censored.size() != s.times.size()) throw DomainError("loglaw_exponent: censoring flags size mismatch");
    const auto n_cens = static_cast<std::size_t>(std::count(s.censored.begin(), s.censored.end(), true));
    const std::size_t n_ok = s.times.size() - n_cens;
    const double med = s.times.empty() ? 0.0 : median_of(s.times);
    const bool use = n_ok >= min_uncensored && 2 * n_cens < s.times.size() && med > 0.0;
    out.radii.push_back(s.r);
    out.log_median.push_back(med > 0.0 ? std::log(med) : -INFINITY);
    out.used.push_back(use);
    if (use) {
      xs.push_back(-std::log(s.r));
      ys.push_back(std::log(med));
    }
  }
  if (xs.empty()) throw FitError("loglaw_exponent: every radius is censored");
  if (xs.size() < min_radii) throw FitError("loglaw_exponent: fewer usable radii than required");
  out.fit = least_squares(xs, ys);
  return out;
}

}  // namespace rovella
