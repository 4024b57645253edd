#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"
#include "rovella/core/rovella_map.hpp"

namespace rovella {

/// First entry of an orbit into the open ball B_r(target).
/// Map times are integer step counts >= 1; flow times are real and >= 0.
template <class State>
struct HittingRecord {
  State start{};
  State target{};
  double r = 0.0;
  double time = 0.0;
  bool censored = false;   // not hit within the cap; time == cap
  bool truncated = false;  // orbit met x = 0 (also censored)
  double cap = 0.0;
  std::uint64_t seed = 0;
};

/// tau_r(x, x0) = min{n >= 1 : d(F^n x, x0) < r}, censored at cap steps.
template <class Map>
HittingRecord<typename Map::state_type> hitting_time(const Map& map, typename Map::state_type x,
                                                     typename Map::state_type x0, double r, std::uint64_t cap) {
  if (!(r > 0.0)) throw DomainError("hitting_time: r must be positive");
  if (cap < 1) throw DomainError("hitting_time: cap must be >= 1");
  HittingRecord<typename Map::state_type> rec{x, x0, r, static_cast<double>(cap), true, false, static_cast<double>(cap), 0};
  auto y = x;
  try {
    for (std::uint64_t n = 1; n <= cap; ++n) {
      y = map(y);
      if (distance(y, x0) < r) {
        rec.time = static_cast<double>(n);
        rec.censored = false;
        return rec;
      }
    }
  } catch (const SingularPointError&) {
    rec.truncated = true;
  }
  return rec;
}

/// tau_r(x0) = tau_r(x0, x0).
template <class Map>
HittingRecord<typename Map::state_type> recurrence_time(const Map& map, typename Map::state_type x0, double r,
                                                        std::uint64_t cap) {
  return hitting_time(map, x0, x0, r, cap);
}

/// Hitting times for a decreasing list of radii from one pass along the orbit.
/// Equal to calling hitting_time once per radius.
template <class Map>
std::vector<HittingRecord<typename Map::state_type>> hitting_times_multi(const Map& map, typename Map::state_type x,
                                                                         typename Map::state_type x0,
                                                                         const std::vector<double>& radii_desc,
                                                                         std::uint64_t cap) {
  for (std::size_t k = 0; k < radii_desc.size(); ++k) {
    if (!(radii_desc[k] > 0.0)) throw DomainError("hitting_times_multi: radii must be positive");
    if (k > 0 && !(radii_desc[k] < radii_desc[k - 1])) throw DomainError("hitting_times_multi: radii must decrease");
  }
  if (cap < 1) throw DomainError("hitting_times_multi: cap must be >= 1");
  std::vector<HittingRecord<typename Map::state_type>> recs;
  for (double r : radii_desc) recs.push_back({x, x0, r, static_cast<double>(cap), true, false, static_cast<double>(cap), 0});
  std::size_t next = 0;
  auto y = x;
  try {
    for (std::uint64_t n = 1; n <= cap && next < recs.size(); ++n) {
      y = map(y);
      const double d = distance(y, x0);
      while (next < recs.size() && d < recs[next].r) {
        recs[next].time = static_cast<double>(n);
        recs[next].censored = false;
        ++next;
      }
    }
  } catch (const SingularPointError&) {
    for (std::size_t k = next; k < recs.size(); ++k) recs[k].truncated = true;
  }
  return recs;
}

/// Suspension of a section map under a roof function.
template <class Map>
struct Suspension {
  const Map* map;
  std::function<double(const typename Map::state_type&)> roof;
};

/// Roof of the contracting Lorenz suspension: transit time through the cube
/// from the top section, return_time_local(e, x, 1), plus a constant time
/// t_glob for the global excursion.
inline std::function<double(const PointQ&)> rovella_roof(const EigenTriple& e, double t_glob = 1.0) {
  return [e, t_glob](const PointQ& q) { return return_time_local(e, q.x, 1.0) + t_glob; };
}

/// Flow time to enter B_r(x0) measured at the section: 0 when x is already
/// inside, else the roof times accumulated along the section orbit up to the
/// first section hit. Censored once the accumulated time exceeds cap_time.
template <class Map>
HittingRecord<typename Map::state_type> flow_hitting_time(const Suspension<Map>& susp, typename Map::state_type x,
                                                          typename Map::state_type x0, double r, double cap_time) {
  if (!(r > 0.0)) throw DomainError("flow_hitting_time: r must be positive");
  if (!(cap_time > 0.0)) throw DomainError("flow_hitting_time: cap_time must be positive");
  HittingRecord<typename Map::state_type> rec{x, x0, r, cap_time, true, false, cap_time, 0};
  if (distance(x, x0) < r) {
    rec.time = 0.0;
    rec.censored = false;
    return rec;
  }
  auto y = x;
  double t = 0.0;
  try {
    while (true) {
      t += susp.roof(y);
      if (t > cap_time) return rec;
      y = (*susp.map)(y);
      if (distance(y, x0) < r) {
        rec.time = t;
        rec.censored = false;
        return rec;
      }
    }
  } catch (const SingularPointError&) {
    rec.truncated = true;
  }
  return rec;
}

/// Flow hitting times for decreasing radii in one pass.
template <class Map>
std::vector<HittingRecord<typename Map::state_type>> flow_hitting_times_multi(const Suspension<Map>& susp,
                                                                              typename Map::state_type x,
                                                                              typename Map::state_type x0,
                                                                              const std::vector<double>& radii_desc,
                                                                              double cap_time) {
  if (!(cap_time > 0.0)) throw DomainError("flow_hitting_times_multi: cap_time must be positive");
  std::vector<HittingRecord<typename Map::state_type>> recs;
  for (double r : radii_desc) recs.push_back({x, x0, r, cap_time, true, false, cap_time, 0});
  std::size_t next = 0;
  double d = distance(x, x0);
  while (next < recs.size() && d < recs[next].r) {
    recs[next].time = 0.0;
    recs[next].censored = false;
    ++next;
  }
  auto y = x;
  double t = 0.0;
  try {
    while (next < recs.size()) {
      t += susp.roof(y);
      if (t > cap_time) break;
      y = (*susp.map)(y);
      d = distance(y, x0);
      while (next < recs.size() && d < recs[next].r) {
        recs[next].time = t;
        recs[next].censored = false;
        ++next;
      }
    }
  } catch (const SingularPointError&) {
    for (std::size_t k = next; k < recs.size(); ++k) recs[k].truncated = true;
  }
  return recs;
}

}  // namespace rovella
