#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"
#include "rovella/stats/fit.hpp"

namespace rovella {

struct LocalDimension {
  double d_lower = 0.0;
  double d_upper = 0.0;
  ScalingFit fit;                 // log mu(B_r) against log r
  std::vector<double> radii;      // radii kept in the fit
  std::vector<double> mass;       // empirical mu(B_r) at those radii
  std::size_t radii_dropped = 0;  // radii with fewer than min_count points
};

/// Slope of log mu(B_r(x0)) against log r for the empirical measure of a
/// point cloud. Radii whose ball holds fewer than min_count points are
/// dropped; lower and upper estimates are the extreme slopes between
/// consecutive kept radii.
template <class State>
LocalDimension local_dimension(const std::vector<State>& cloud, const State& x0, std::vector<double> radii,
                               std::size_t min_count = 50) {
  if (cloud.empty()) throw DomainError("local_dimension: empty cloud");
  if (radii.size() < 2) throw DomainError("local_dimension: at least two radii required");
  std::sort(radii.begin(), radii.end());
  for (double r : radii)
    if (!(r > 0.0)) throw DomainError("local_dimension: radii must be positive");

  // counts[k] = #{d < radii[k]}
  std::vector<std::size_t> counts(radii.size() + 1, 0);
  for (const auto& p : cloud) {
    const double d = distance(p, x0);
    const auto k = static_cast<std::size_t>(std::upper_bound(radii.begin(), radii.end(), d) - radii.begin());
    ++counts[k];
  }
  std::size_t cum = 0;
  std::vector<std::size_t> inside(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    cum += counts[k];
    inside[k] = cum;
  }

  LocalDimension out;
  std::vector<double> lx, ly;
  const double N = static_cast<double>(cloud.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (inside[k] < min_count) {
      ++out.radii_dropped;
      continue;
    }
    out.radii.push_back(radii[k]);
    out.mass.push_back(static_cast<double>(inside[k]) / N);
    lx.push_back(std::log(radii[k]));
    ly.push_back(std::log(out.mass.back()));
  }
  if (lx.size() < 2) throw FitError("local_dimension: fewer than two radii with enough points");
  out.fit = least_squares(lx, ly);
  out.d_lower = out.d_upper = (ly[1] - ly[0]) / (lx[1] - lx[0]);
  for (std::size_t k = 1; k < lx.size(); ++k) {
    const double sl = (ly[k] - ly[k - 1]) / (lx[k] - lx[k - 1]);
    out.d_lower = std::min(out.d_lower, sl);
    out.d_upper = std::max(out.d_upper, sl);
  }
  return out;
}

}  // namespace rovella
