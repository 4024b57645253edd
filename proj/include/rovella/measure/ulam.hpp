#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"
#include "rovella/core/parallel.hpp"
#include "rovella/core/rng.hpp"

namespace rovella {

/// Row-stochastic sparse matrix (CSR) on n equal bins of an interval.
struct UlamOperator {
  std::size_t n = 0;
  Interval domain{};
  std::vector<std::size_t> row_ptr;  // size n + 1
  std::vector<std::size_t> col;
  std::vector<double> val;

  double bin_width() const { return domain.length() / static_cast<double>(n); }
  double bin_lo(std::size_t i) const { return domain.lo + domain.length() * static_cast<double>(i) / static_cast<double>(n); }
  double bin_hi(std::size_t i) const { return i + 1 == n ? domain.hi : bin_lo(i + 1); }
  double bin_center(std::size_t i) const { return 0.5 * (bin_lo(i) + bin_hi(i)); }

  std::size_t bin_of(double x) const {
    const double u = (x - domain.lo) / domain.length() * static_cast<double>(n);
    if (!(u > 0.0)) return 0;
    return std::min(n - 1, static_cast<std::size_t>(u));
  }

  double row_sum(std::size_t i) const {
    double s = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k];
    return s;
  }

  /// w = v P.
  void left_multiply(const std::vector<double>& v, std::vector<double>& w) const {
    w.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = v[i];
      if (vi == 0.0) continue;
      for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) w[col[k]] += vi * val[k];
    }
  }

  static UlamOperator identity(std::size_t n, Interval domain = {0.0, 1.0}) {
    UlamOperator u;
    u.n = n;
    u.domain = domain;
    u.row_ptr.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) u.row_ptr[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
      u.col.push_back(i);
      u.val.push_back(1.0);
    }
    return u;
  }
};

/// Ulam discretization P_ij ~ m(B_i & T^-1 B_j) / m(B_i) by jittered
/// stratified sampling. A bin containing a discontinuity of the map is cut
/// there and each piece gets samples_per_bin samples weighted by its length,
/// so each branch image receives the mass of its own piece.
template <class Map>
UlamOperator build_ulam(const Map& map, std::size_t n_bins, std::size_t samples_per_bin = 64, std::uint64_t seed = 1,
                        unsigned threads = 1) {
  if (n_bins < 2) throw ValidationError("build_ulam: n_bins must be >= 2");
  if (samples_per_bin == 0) throw ValidationError("build_ulam: samples_per_bin must be positive");
  UlamOperator u;
  u.n = n_bins;
  u.domain = map.domain();
  const auto cuts_all = map.discontinuities();

  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n_bins);
  const std::size_t tasks = std::min<std::size_t>(n_bins, 256);
  parallel_for(tasks, threads, [&](std::size_t t) {
    const auto [first, last] = chunk_bounds(n_bins, tasks, t);
    for (std::size_t i = first; i < last; ++i) {
      auto rng = make_stream(seed, i);
      const double lo = u.bin_lo(i), hi = u.bin_hi(i);
      std::vector<double> edges{lo};
      for (double c : cuts_all)
        if (c > lo && c < hi) edges.push_back(c);
      edges.push_back(hi);
      std::map<std::size_t, double> acc;
      const double m = static_cast<double>(samples_per_bin);
      for (std::size_t piece = 0; piece + 1 < edges.size(); ++piece) {
        const double a = edges[piece], b = edges[piece + 1];
        const double w = (b - a) / (hi - lo) / m;
        for (std::size_t j = 0; j < samples_per_bin; ++j) {
          double x = a + (b - a) * (static_cast<double>(j) + rng.uniform01()) / m;
          x = std::clamp(x, a, b);
          double y;
          try {
            y = map(x);
          } catch (const SingularPointError&) {
            continue;  // measure-zero event
          }
          acc[u.bin_of(y)] += w;
        }
      }
      double total = 0.0;
      for (auto& [j, v] : acc) total += v;
      auto& row = rows[i];
      for (auto& [j, v] : acc) row.emplace_back(j, v / total);
    }
  });

  u.row_ptr.assign(n_bins + 1, 0);
  for (std::size_t i = 0; i < n_bins; ++i) {
    u.row_ptr[i + 1] = u.row_ptr[i] + rows[i].size();
    for (auto& [j, v] : rows[i]) {
      u.col.push_back(j);
      u.val.push_back(v);
    }
  }
  return u;
}

}  // namespace rovella
