#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <type_traits>

#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"

namespace rovella {

/// Observables selectable by name in configuration files. Interval states
/// are evaluated with y = 0.
inline std::function<double(double, double)> named_observable(const std::string& name) {
  if (name == "one") return [](double, double) { return 1.0; };
  if (name == "x") return [](double x, double) { return x; };
  if (name == "y") return [](double, double y) { return y; };
  if (name == "x2") return [](double x, double) { return x * x; };
  if (name == "x+y") return [](double x, double y) { return x + y; };
  if (name == "xy+x") return [](double x, double y) { return x * y + x; };
  if (name == "sin_pi_x") return [](double x, double) { return std::sin(std::numbers::pi * x); };
  throw ValidationError("unknown observable '" + name + "'");
}

/// Adapts a two-argument observable to a map state.
template <class State>
std::function<double(const State&)> on_state(std::function<double(double, double)> f) {
  if constexpr (std::is_same_v<State, PointQ>) {
    return [f](const PointQ& q) { return f(q.x, q.y); };
  } else {
    return [f](const double& x) { return f(x, 0.0); };
  }
}

}  // namespace rovella
