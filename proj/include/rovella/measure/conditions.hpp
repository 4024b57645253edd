#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/rovella_map.hpp"
#include "rovella/stats/fit.hpp"

namespace rovella {

/// Finite-depth diagnostics of the conditions on the critical values +-1/2.
/// Report only: no finite depth certifies them.
struct ConditionReport {
  std::size_t depth = 0;
  double c1_exponent = 0.0;       // fitted exponent of |T'(x)| against |x| near 0
  double c1_expected = 0.0;       // s - 1
  double c2_min_root = 0.0;       // min over n, sign of |(T^n)'(+-1/2)|^(1/n)
  double c3_alpha_min = 0.0;      // smallest alpha with |T^(n-1)(+-1/2)| > e^(-alpha n) for all n <= depth
  double c4_fraction_visited = 0; // fraction of 256 bins met by the critical orbits
  std::size_t c4_iterates = 0;
  bool critical_orbit_hit_zero = false;
};

inline ConditionReport check_rovella_conditions(const RovellaParams& p, std::size_t depth = 60) {
  if (depth == 0 || depth > 60) throw DomainError("check_rovella_conditions: depth must be in [1, 60]");
  ConditionReport rep;
  rep.depth = depth;
  rep.c1_expected = p.s() - 1.0;

  std::vector<double> lx, ly;
  for (int k = 4; k <= 20; ++k) {
    const double x = std::ldexp(1.0, -k);
    lx.push_back(std::log(x));
    ly.push_back(std::log(std::abs(eval_T_deriv(p, x, 1))));
  }
  rep.c1_exponent = least_squares(lx, ly).slope;

  double min_root = std::numeric_limits<double>::infinity();
  double alpha = -std::numeric_limits<double>::infinity();
  for (double start : {0.5, -0.5}) {
    double x = start;
    double log_prod = 0.0;
    for (std::size_t n = 1; n <= depth; ++n) {
      // x = T^(n-1)(start)
      if (is_singular(x)) {
        rep.critical_orbit_hit_zero = true;
        alpha = std::numeric_limits<double>::infinity();
        min_root = 0.0;
        break;
      }
      alpha = std::max(alpha, -std::log(std::abs(x)) / static_cast<double>(n));
      log_prod += std::log(std::abs(eval_T_deriv(p, x, 1)));
      min_root = std::min(min_root, std::exp(log_prod / static_cast<double>(n)));
      x = eval_T(p, x);
    }
  }
  rep.c2_min_root = min_root;
  rep.c3_alpha_min = alpha;

  constexpr std::size_t bins = 256;
  std::vector<bool> seen(bins, false);
  rep.c4_iterates = depth * 100;
  for (double start : {0.5, -0.5}) {
    double x = start;
    for (std::size_t k = 0; k < rep.c4_iterates; ++k) {
      const auto b = std::min<std::size_t>(bins - 1, static_cast<std::size_t>((x + 0.5) * bins));
      seen[b] = true;
      if (is_singular(x)) break;
      x = eval_T(p, x);
    }
  }
  rep.c4_fraction_visited =
      static_cast<double>(std::count(seen.begin(), seen.end(), true)) / static_cast<double>(bins);
  return rep;
}

}  // namespace rovella
