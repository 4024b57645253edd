#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"
#include "rovella/norms/grid.hpp"
#include "rovella/stats/fit.hpp"

namespace rovella {

struct NormGrowth {
  std::vector<double> base_norm;    // ||pi(f o F^n)||_{1,alpha}
  std::vector<double> square_var;   // Var^square(f o F^n)
  std::vector<double> series;       // their sum
  std::optional<ScalingFit> fit;    // log series against n; slope bounds log K
};

/// Measures ||pi(f o F^n)||_{1,alpha} + Var^square(f o F^n) for n = 0..n_max
/// on a grid x grid vertex grid of Q.
template <class SkewMap>
NormGrowth norm_growth_series(const std::function<double(double, double)>& f, const SkewMap& F, std::size_t n_max,
                              std::size_t grid = 128, double alpha = 0.5) {
  if (n_max > 30) throw DomainError("norm_growth_series: n_max must be <= 30");
  const auto base = GridObservable::sample_square([](double, double) { return 0.0; }, grid);
  std::vector<PointQ> pts(grid * grid);
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t j = 0; j < grid; ++j) pts[i * grid + j] = {base.coord(i), base.coord(j)};

  NormGrowth out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    GridObservable h = base;
    for (std::size_t k = 0; k < pts.size(); ++k) h.samples[k] = f(pts[k].x, pts[k].y);
    const auto pi = project_pi(h);
    const double b = var_pr_norm(pi, 1.0, alpha).norm;
    const double v = var_square(h);
    out.base_norm.push_back(b);
    out.square_var.push_back(v);
    out.series.push_back(b + v);
    if (n < n_max) {
      for (auto& q : pts) q = F(q);
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t n = 0; n < out.series.size(); ++n) {
    if (out.series[n] > 0.0) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(out.series[n]));
    }
  }
  if (xs.size() >= 2) out.fit = least_squares(xs, ys);
  return out;
}

}  // namespace rovella
