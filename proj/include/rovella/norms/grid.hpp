#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"

namespace rovella {

enum class GridDomain { interval, square };

/// Samples of a function on the uniform vertex grid x_i = lo + i h,
/// h = (hi - lo)/(n - 1), i = 0..n-1 (and the same grid in y for squares).
/// Square samples are stored column-major in x: index i*n + j is (x_i, y_j).
struct GridObservable {
  GridDomain domain = GridDomain::interval;
  std::size_t n = 0;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> samples;

  GridObservable() = default;
  GridObservable(GridDomain d, std::size_t n_, double lo_, double hi_, std::vector<double> s)
      : domain(d), n(n_), lo(lo_), hi(hi_), samples(std::move(s)) {
    if (n < 2) throw ValidationError("GridObservable: resolution must be >= 2");
    if (!(hi > lo)) throw ValidationError("GridObservable: empty domain");
    const std::size_t expect = d == GridDomain::interval ? n : n * n;
    if (samples.size() != expect) throw ValidationError("GridObservable: sample count does not match resolution");
  }

  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  double coord(std::size_t i) const { return i + 1 == n ? hi : lo + static_cast<double>(i) * step(); }
  double at(std::size_t i, std::size_t j) const { return samples[i * n + j]; }
  bool is_square() const { return domain == GridDomain::square; }

  static GridObservable sample_interval(const std::function<double(double)>& f, std::size_t n, double lo = 0.0,
                                        double hi = 1.0) {
    GridObservable g(GridDomain::interval, n, lo, hi, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) g.samples[i] = f(g.coord(i));
    return g;
  }

  static GridObservable sample_square(const std::function<double(double, double)>& f, std::size_t n,
                                      double lo = -0.5, double hi = 0.5) {
    GridObservable g(GridDomain::square, n, lo, hi, std::vector<double>(n * n));
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g.coord(i);
      for (std::size_t j = 0; j < n; ++j) g.samples[i * n + j] = f(x, g.coord(j));
    }
    return g;
  }
};

namespace detail {

inline void require_interval(const GridObservable& f, const char* what) {
  if (f.is_square()) throw DomainError(std::string(what) + ": interval-domain observable required");
}
inline void require_square(const GridObservable& f, const char* what) {
  if (!f.is_square()) throw DomainError(std::string(what) + ": square-domain observable required");
}

/// Number of neighbours on each side inside an open ball of radius eps.
inline std::size_t window_half_width(const GridObservable& f, double eps) {
  const double ratio = eps / f.step();
  const double c = std::ceil(ratio - 1e-12 * std::max(1.0, ratio));
  return c <= 1.0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(c) - 1, f.n - 1);
}

/// Even reflection about the end samples.
inline std::size_t reflect_index(long j, std::size_t n) {
  const long last = static_cast<long>(n) - 1;
  if (j < 0) j = -j;
  if (j > last) j = 2 * last - j;
  return static_cast<std::size_t>(std::clamp(j, 0L, last));
}

}  // namespace detail

inline double sup_norm(const GridObservable& f) {
  double m = 0.0;
  for (double v : f.samples) m = std::max(m, std::abs(v));
  return m;
}

/// L^p norm with respect to the normalized counting measure on the samples.
inline double lp_norm(const GridObservable& f, double p) {
  if (std::isinf(p)) return sup_norm(f);
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  double acc = 0.0;
  for (double v : f.samples) acc += std::pow(std::abs(v), p);
  return std::pow(acc / static_cast<double>(f.samples.size()), 1.0 / p);
}

/// sup_{i != j} |f_i - f_j| / |x_i - x_j|^alpha over all sample pairs.
inline double holder_seminorm(const GridObservable& f, double alpha) {
  detail::require_interval(f, "holder_seminorm");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("holder_seminorm: alpha must lie in (0, 1]");
  const auto& v = f.samples;
  const double h = f.step();
  double best = 0.0;
  for (std::size_t k = 1; k < f.n; ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i + k < f.n; ++i) m = std::max(m, std::abs(v[i + k] - v[i]));
    best = std::max(best, m * std::pow(static_cast<double>(k) * h, -alpha));
  }
  return best;
}

/// Per-sample oscillation max - min over the samples strictly within eps.
inline std::vector<double> oscillation(const GridObservable& f, double eps) {
  detail::require_interval(f, "oscillation");
  const std::size_t m = detail::window_half_width(f, eps);
  const auto& v = f.samples;
  const std::size_t n = f.n;
  std::vector<double> out(n);
  std::deque<std::size_t> qmax, qmin;
  std::size_t next = 0;  // next index to push
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t right = std::min(n - 1, i + m);
    while (next <= right) {
      while (!qmax.empty() && v[qmax.back()] <= v[next]) qmax.pop_back();
      qmax.push_back(next);
      while (!qmin.empty() && v[qmin.back()] >= v[next]) qmin.pop_back();
      qmin.push_back(next);
      ++next;
    }
    const std::size_t left = i >= m ? i - m : 0;
    while (qmax.front() < left) qmax.pop_front();
    while (qmin.front() < left) qmin.pop_front();
    out[i] = v[qmax.front()] - v[qmin.front()];
  }
  return out;
}

/// osc_p(f, eps) on the grid; p = inf allowed.
inline double osc_p(const GridObservable& f, double eps, double p) {
  if (!(eps > 0.0)) throw DomainError("osc_p: eps must be positive");
  if (!(p >= 1.0)) throw DomainError("osc_p: p must be >= 1");
  const auto o = oscillation(f, eps);
  if (std::isinf(p)) return *std::max_element(o.begin(), o.end());
  double acc = 0.0;
  for (double v : o) acc += std::pow(v, p);
  return std::pow(acc / static_cast<double>(o.size()), 1.0 / p);
}

struct GridVarPr {
  double seminorm = 0.0;
  double norm = 0.0;
  double argmax_eps = 1.0;
};

/// Var_{p,r} over eps in {2^-k} from 1 down to the resolution floor 4/n (A = 1).
inline GridVarPr var_pr_norm(const GridObservable& f, double p, double r) {
  detail::require_interval(f, "var_pr_norm");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("var_pr_norm: r must lie in [0, 1]");
  GridVarPr out;
  const double floor_eps = 4.0 / static_cast<double>(f.n);
  for (int k = 0;; ++k) {
    const double eps = std::ldexp(1.0, -k);
    if (k > 0 && eps < floor_eps) break;
    const double v = std::pow(eps, -r) * osc_p(f, eps, p);
    if (v > out.seminorm) {
      out.seminorm = v;
      out.argmax_eps = eps;
    }
  }
  out.norm = out.seminorm + lp_norm(f, p);
  return out;
}

/// Universal p-variation of the sampled function (all sample subsequences).
inline double universal_var_p(const GridObservable& f, double p) {
  detail::require_interval(f, "universal_var_p");
  if (!(p >= 1.0)) throw DomainError("universal_var_p: p must be >= 1");
  const auto& v = f.samples;
  std::vector<double> best(v.size(), 0.0);
  double top = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) best[j] = std::max(best[j], best[i] + std::pow(std::abs(v[j] - v[i]), p));
    top = std::max(top, best[j]);
  }
  return std::pow(top, 1.0 / p);
}

/// f * rho_eps with rho_eps = (1/2eps) 1_{B(0,eps)}: average over the samples
/// strictly within eps, the domain extended by even reflection. Uses the same
/// window as oscillation(), so |f - f_eps| <= osc(f, eps, .) holds pointwise.
inline GridObservable mollify(const GridObservable& f, double eps) {
  detail::require_interval(f, "mollify");
  if (!(eps > 0.0 && eps <= 0.25 * (f.hi - f.lo))) throw DomainError("mollify: eps must lie in (0, 1/4]");
  const long m = static_cast<long>(detail::window_half_width(f, eps));
  const std::size_t n = f.n;
  GridObservable out = f;
  const double inv = 1.0 / static_cast<double>(2 * m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long j = static_cast<long>(i) - m; j <= static_cast<long>(i) + m; ++j) acc += f.samples[detail::reflect_index(j, n)];
    out.samples[i] = acc * inv;
  }
  return out;
}

struct MollifiedHolder {
  double seminorm = 0.0;
  double bound = 0.0;  // 2 eps^-alpha ||f||_inf
};

/// Holder seminorm of the mollified function together with the bound
/// 2 eps^-alpha ||f||_inf; throws PropertyViolation when the bound fails.
inline MollifiedHolder holder_bound_of_mollified(const GridObservable& f, double eps, double alpha) {
  MollifiedHolder out;
  out.seminorm = holder_seminorm(mollify(f, eps), alpha);
  out.bound = 2.0 * std::pow(eps, -alpha) * sup_norm(f);
  if (out.seminorm > out.bound * (1.0 + 1e-12) + 1e-300) {
    throw PropertyViolation("holder_bound_of_mollified: Hol_alpha(f_eps) exceeds 2 eps^-alpha ||f||_inf");
  }
  return out;
}

/// Lip_y: supremum over columns of the vertical difference quotient. On a
/// grid the largest quotient is always attained by adjacent samples.
inline double lip_y(const GridObservable& g) {
  detail::require_square(g, "lip_y");
  const double h = g.step();
  double best = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j + 1 < g.n; ++j) best = std::max(best, std::abs(g.at(i, j + 1) - g.at(i, j)) / h);
  }
  return best;
}

/// ||g||_{y-Lip} = ||g||_sup + Lip_y(g).
inline double y_lip_norm(const GridObservable& g) {
  detail::require_square(g, "y_lip_norm");
  return sup_norm(g) + lip_y(g);
}

/// Var^square on the grid: for each consecutive column pair take the y that
/// maximizes the column difference and sum. Refining a subdivision never
/// decreases the sum, so the finest grid subdivision attains the maximum.
inline double var_square(const GridObservable& g) {
  detail::require_square(g, "var_square");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < g.n; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) m = std::max(m, std::abs(g.at(i + 1, j) - g.at(i, j)));
    total += m;
  }
  return total;
}

/// pi(f)(x) = int f(x, t) dt, composite trapezoid rule in each column.
inline GridObservable project_pi(const GridObservable& g) {
  detail::require_square(g, "project_pi");
  const double h = g.step();
  GridObservable out(GridDomain::interval, g.n, g.lo, g.hi, std::vector<double>(g.n));
  for (std::size_t i = 0; i < g.n; ++i) {
    double acc = 0.5 * (g.at(i, 0) + g.at(i, g.n - 1));
    for (std::size_t j = 1; j + 1 < g.n; ++j) acc += g.at(i, j);
    out.samples[i] = acc * h;
  }
  return out;
}

}  // namespace rovella
