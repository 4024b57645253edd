#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/stats/series.hpp"

namespace rovella {

/// Ordinary least-squares line y = slope x + intercept.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0;  // smallest abscissa used
  double window_hi = 0.0;  // largest abscissa used
  std::size_t points = 0;
};

inline ScalingFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw FitError("least_squares: size mismatch");
  if (x.size() < 2) throw FitError("least_squares: at least two points required");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw FitError("least_squares: abscissae are all equal");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.window_lo = *std::min_element(x.begin(), x.end());
  fit.window_hi = *std::max_element(x.begin(), x.end());
  fit.points = x.size();
  return fit;
}

/// Which lags enter an exponential fit.
struct NoiseFloorPolicy {
  double factor = 3.0;         // keep |C(n)| > factor * stderr(n)
  std::size_t min_points = 4;  // fewer points is an error
  bool leading_run = true;     // stop at the first lag that falls below the floor
};

/// Least squares on (n, log|C(n)|) over the lags above the noise floor.
/// The slope estimates log Lambda.
inline ScalingFit fit_exponential(const CorrelationSeries& s, const NoiseFloorPolicy& policy = {}) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < s.lags.size(); ++k) {
    const double c = std::abs(s.estimate[k]);
    const double floor = policy.factor * (k < s.std_error.size() ? s.std_error[k] : 0.0);
    if (c > floor && c > 0.0) {
      xs.push_back(static_cast<double>(s.lags[k]));
      ys.push_back(std::log(c));
    } else if (policy.leading_run && !xs.empty()) {
      break;
    }
  }
  if (xs.size() < policy.min_points) throw FitError("fit_exponential: too few points above the noise floor");
  return least_squares(xs, ys);
}

}  // namespace rovella
