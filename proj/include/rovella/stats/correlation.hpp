#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/parallel.hpp"
#include "rovella/core/rng.hpp"
#include "rovella/measure/orbit.hpp"
#include "rovella/stats/series.hpp"

namespace rovella {

namespace detail {

inline void require_lags(const std::vector<std::size_t>& lags) {
  if (lags.empty()) throw ValidationError("correlation: lag list is empty");
  for (std::size_t k = 1; k < lags.size(); ++k)
    if (lags[k] <= lags[k - 1]) throw ValidationError("correlation: lags must be strictly increasing");
}

/// Per-block sums over starts x: f(x), g(F^n x), f(x) g(F^n x).
struct BlockSums {
  std::size_t count = 0;
  std::size_t excluded = 0;
  double sf = 0.0;
  std::vector<double> sg, sfg;
};

template <class Map, class F, class G>
std::vector<BlockSums> lagged_block_sums(const Map& map, const F& f, const G& g,
                                         const std::vector<typename Map::state_type>& starts,
                                         const std::vector<std::size_t>& lags, std::size_t blocks, unsigned threads) {
  const std::size_t L = lags.size();
  blocks = std::max<std::size_t>(1, std::min(blocks, starts.size()));
  std::vector<BlockSums> out(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    auto& s = out[b];
    s.sg.assign(L, 0.0);
    s.sfg.assign(L, 0.0);
    std::vector<double> gv(L);
    const auto [lo, hi] = chunk_bounds(starts.size(), blocks, b);
    for (std::size_t i = lo; i < hi; ++i) {
      auto y = starts[i];
      const double fx = f(y);
      std::size_t n = 0;
      bool ok = true;
      try {
        for (std::size_t k = 0; k < L; ++k) {
          while (n < lags[k]) {
            y = map(y);
            ++n;
          }
          gv[k] = g(y);
        }
      } catch (const SingularPointError&) {
        ok = false;
      }
      if (!ok) {
        ++s.excluded;
        continue;
      }
      ++s.count;
      s.sf += fx;
      for (std::size_t k = 0; k < L; ++k) {
        s.sg[k] += gv[k];
        s.sfg[k] += fx * gv[k];
      }
    }
  });
  return out;
}

/// Leave-one-block-out standard error of an estimator given per-block
/// replicate values.
inline double jackknife_se(const std::vector<double>& replicates) {
  const double B = static_cast<double>(replicates.size());
  if (replicates.size() < 2) return 0.0;
  double mean = 0.0;
  for (double r : replicates) mean += r;
  mean /= B;
  double ss = 0.0;
  for (double r : replicates) ss += (r - mean) * (r - mean);
  return std::sqrt((B - 1.0) / B * ss);
}

}  // namespace detail

/// C(n) = mean[f(x) g(F^n x)] - mean[f] mean[g] over starts from the
/// empirical invariant measure, with block-jackknife standard errors.
/// Starts whose orbit meets x = 0 are excluded and counted.
template <class Map, class F, class G>
CorrelationSeries corr_n(const Map& map, const F& f, const G& g, const std::vector<std::size_t>& lags,
                         const EnsembleConfig& cfg, std::size_t blocks = 100) {
  detail::require_lags(lags);
  const auto starts = sample_invariant(map, cfg);
  const auto sums = detail::lagged_block_sums(map, f, g, starts, lags, blocks, cfg.threads);
  const std::size_t L = lags.size();

  detail::BlockSums tot;
  tot.sg.assign(L, 0.0);
  tot.sfg.assign(L, 0.0);
  for (const auto& s : sums) {
    tot.count += s.count;
    tot.excluded += s.excluded;
    tot.sf += s.sf;
    for (std::size_t k = 0; k < L; ++k) {
      tot.sg[k] += s.sg[k];
      tot.sfg[k] += s.sfg[k];
    }
  }
  if (tot.count == 0) throw DomainError("corr_n: every start was excluded");

  auto estimate = [](double n, double sf, double sg, double sfg) { return sfg / n - (sf / n) * (sg / n); };
  CorrelationSeries out;
  out.kind = SeriesKind::correlation;
  out.lags = lags;
  out.ensemble_size = tot.count;
  out.excluded = tot.excluded;
  const double N = static_cast<double>(tot.count);
  for (std::size_t k = 0; k < L; ++k) {
    out.estimate.push_back(estimate(N, tot.sf, tot.sg[k], tot.sfg[k]));
    std::vector<double> reps;
    for (const auto& s : sums) {
      const double n = N - static_cast<double>(s.count);
      if (n <= 0.0) continue;
      reps.push_back(estimate(n, tot.sf - s.sf, tot.sg[k] - s.sg[k], tot.sfg[k] - s.sfg[k]));
    }
    out.std_error.push_back(detail::jackknife_se(reps));
  }
  return out;
}

/// Conv_n = |mean_m[f(x) g(T^n x)] - mean_mu[g] mean_m[f]|: starts x from the
/// reference (Lebesgue) measure; mean_mu[g] from an invariant ensemble of the
/// same size.
template <class Map, class F, class G>
CorrelationSeries conv_n(const Map& map, const F& f, const G& g, const std::vector<std::size_t>& lags,
                         const EnsembleConfig& cfg, std::size_t blocks = 100) {
  detail::require_lags(lags);
  EnsembleConfig ref = cfg;
  ref.burn_in = 0;
  ref.seed = derive_seed(cfg.seed, 0x636f6e76ULL);
  const auto starts = sample_invariant(map, ref);
  const auto inv = sample_invariant(map, cfg);
  const auto sums = detail::lagged_block_sums(map, f, g, starts, lags, blocks, cfg.threads);
  const std::size_t L = lags.size();
  const std::size_t B = sums.size();

  std::vector<double> inv_block(B, 0.0), inv_count(B, 0.0);
  for (std::size_t b = 0; b < B; ++b) {
    const auto [lo, hi] = chunk_bounds(inv.size(), B, b);
    for (std::size_t i = lo; i < hi; ++i) inv_block[b] += g(inv[i]);
    inv_count[b] = static_cast<double>(hi - lo);
  }
  double inv_total = 0.0, inv_n = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    inv_total += inv_block[b];
    inv_n += inv_count[b];
  }

  double N = 0.0, sf = 0.0;
  std::size_t excluded = 0;
  std::vector<double> sfg(L, 0.0);
  for (const auto& s : sums) {
    N += static_cast<double>(s.count);
    excluded += s.excluded;
    sf += s.sf;
    for (std::size_t k = 0; k < L; ++k) sfg[k] += s.sfg[k];
  }
  if (N == 0.0) throw DomainError("conv_n: every start was excluded");

  auto signed_est = [](double n, double sf_, double sfg_, double m, double sg_) { return sfg_ / n - (sg_ / m) * (sf_ / n); };
  CorrelationSeries out;
  out.kind = SeriesKind::convergence;
  out.lags = lags;
  out.ensemble_size = static_cast<std::size_t>(N);
  out.excluded = excluded;
  for (std::size_t k = 0; k < L; ++k) {
    out.estimate.push_back(std::abs(signed_est(N, sf, sfg[k], inv_n, inv_total)));
    std::vector<double> reps;
    for (std::size_t b = 0; b < B; ++b) {
      const double n = N - static_cast<double>(sums[b].count);
      const double m = inv_n - inv_count[b];
      if (n <= 0.0 || m <= 0.0) continue;
      reps.push_back(signed_est(n, sf - sums[b].sf, sfg[k] - sums[b].sfg[k], m, inv_total - inv_block[b]));
    }
    out.std_error.push_back(detail::jackknife_se(reps));
  }
  return out;
}

}  // namespace rovella
