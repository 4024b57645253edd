#pragma once

#include <cmath>

namespace rovella {

/// Closed interval [lo, hi].
struct Interval {
  double lo = -0.5;
  double hi = 0.5;
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Point of the cross-section Q = [-1/2, 1/2]^2.
struct PointQ {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PointQ&, const PointQ&) = default;
};

/// Point of the cube [-1, 1]^3 together with elapsed flow time.
struct FlowState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;
};

inline double distance(double a, double b) { return std::abs(a - b); }
inline double distance(const PointQ& a, const PointQ& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Base (unstable) coordinate of a state.
inline double x_of(double v) { return v; }
inline double x_of(const PointQ& q) { return q.x; }

}  // namespace rovella
