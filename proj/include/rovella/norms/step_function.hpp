#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"
#include "rovella/core/rng.hpp"

namespace rovella {

/// Piecewise-constant function on [lo, hi]. Piece i covers
/// [b_{i-1}, b_i) with b_{-1} = lo and b_k = hi; the last piece is closed.
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> values, Interval domain = {0.0, 1.0})
      : breaks_(std::move(breakpoints)), values_(std::move(values)), dom_(domain) {
    if (!(dom_.hi > dom_.lo)) throw ValidationError("StepFunction: empty domain");
    if (values_.size() != breaks_.size() + 1) throw ValidationError("StepFunction: piece count must be breakpoint count + 1");
    double prev = dom_.lo;
    for (double b : breaks_) {
      if (!(b > prev)) throw ValidationError("StepFunction: breakpoints must be strictly increasing inside the domain");
      prev = b;
    }
    if (!(dom_.hi > prev)) throw ValidationError("StepFunction: breakpoints must lie inside the domain");
  }

  static StepFunction constant(double c, Interval domain = {0.0, 1.0}) { return StepFunction({}, {c}, domain); }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  const Interval& domain() const { return dom_; }
  std::size_t pieces() const { return values_.size(); }

  double piece_lo(std::size_t i) const { return i == 0 ? dom_.lo : breaks_[i - 1]; }
  double piece_hi(std::size_t i) const { return i == breaks_.size() ? dom_.hi : breaks_[i]; }

  double operator()(double x) const {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return values_[static_cast<std::size_t>(it - breaks_.begin())];
  }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// L^p norm w.r.t. Lebesgue measure normalized to mass 1; p = inf allowed.
  double lp_norm(double p) const {
    if (std::isinf(p)) return sup_norm();
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces(); ++i) acc += std::pow(std::abs(values_[i]), p) * (piece_hi(i) - piece_lo(i));
    return std::pow(acc / dom_.length(), 1.0 / p);
  }

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
  Interval dom_;
};

/// Random step function with 1..max_pieces pieces, values uniform in [vmin, vmax].
inline StepFunction random_step_function(Xoshiro256& rng, std::size_t max_pieces = 20, double vmin = -1.0,
                                         double vmax = 1.0, Interval domain = {0.0, 1.0}) {
  const std::size_t pieces = 1 + static_cast<std::size_t>(rng.below(max_pieces));
  std::vector<double> breaks;
  while (breaks.size() + 1 < pieces) {
    const double b = rng.uniform(domain.lo, domain.hi);
    if (std::find(breaks.begin(), breaks.end(), b) == breaks.end()) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> values(pieces);
  for (auto& v : values) v = rng.uniform(vmin, vmax);
  return StepFunction(std::move(breaks), std::move(values), domain);
}

/// Universal p-variation, exact. A subdivision of the domain reads off an
/// ordered subsequence of piece values, so the supremum is a longest-path
/// problem over the pieces: best[j] = max(0, max_{i<j} best[i] + |v_j - v_i|^p).
inline double universal_var_p(const StepFunction& f, double p) {
  if (!(p >= 1.0)) throw DomainError("universal_var_p: p must be >= 1");
  const auto& v = f.values();
  std::vector<double> best(v.size(), 0.0);
  double top = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) best[j] = std::max(best[j], best[i] + std::pow(std::abs(v[j] - v[i]), p));
    top = std::max(top, best[j]);
  }
  return std::pow(top, 1.0 / p);
}

/// Essential oscillation of f over the open ball (x - eps, x + eps)
/// intersected with the domain.
inline double oscillation_at(const StepFunction& f, double eps, double x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < f.pieces(); ++i) {
    if (f.piece_lo(i) < x + eps && f.piece_hi(i) > x - eps) {
      lo = std::min(lo, f.values()[i]);
      hi = std::max(hi, f.values()[i]);
    }
  }
  return hi >= lo ? hi - lo : 0.0;
}

/// osc_p(f, eps) = || osc(f, eps, .) ||_p, computed exactly: osc(f, eps, x)
/// is constant between consecutive points of {b_i +- eps}.
inline double osc_p(const StepFunction& f, double eps, double p) {
  if (!(eps > 0.0)) throw DomainError("osc_p: eps must be positive");
  if (!(p >= 1.0)) throw DomainError("osc_p: p must be >= 1");
  const auto& dom = f.domain();
  std::vector<double> cuts{dom.lo, dom.hi};
  for (double b : f.breakpoints()) {
    for (double c : {b - eps, b + eps}) {
      if (c > dom.lo && c < dom.hi) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double acc = 0.0;
  double peak = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double w = cuts[k + 1] - cuts[k];
    if (w <= 0.0) continue;
    const double o = oscillation_at(f, eps, 0.5 * (cuts[k] + cuts[k + 1]));
    peak = std::max(peak, o);
    if (!std::isinf(p)) acc += std::pow(o, p) * w;
  }
  if (std::isinf(p)) return peak;
  return std::pow(acc / dom.length(), 1.0 / p);
}

/// Seminorm and full norm of BV_{p,r}.
struct VarPr {
  double seminorm = 0.0;  // Var_{p,r}
  double norm = 0.0;      // Var_{p,r} + ||f||_p
  double argmax_eps = 1.0;
};

/// sup over eps in {2^-k : 0 <= k <= k_max} of eps^-r osc_p(f, eps), with A = 1.
inline VarPr var_pr_norm(const StepFunction& f, double p, double r, int k_max = 30) {
  if (!(p >= 1.0)) throw DomainError("var_pr_norm: p must be >= 1");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("var_pr_norm: r must lie in [0, 1]");
  VarPr out;
  for (int k = 0; k <= k_max; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const double v = std::pow(eps, -r) * osc_p(f, eps, p);
    if (v > out.seminorm) {
      out.seminorm = v;
      out.argmax_eps = eps;
    }
  }
  out.norm = out.seminorm + f.lp_norm(p);
  return out;
}

}  // namespace rovella
