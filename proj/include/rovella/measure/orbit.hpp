#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rovella/core/errors.hpp"
#include "rovella/core/geometry.hpp"
#include "rovella/core/parallel.hpp"
#include "rovella/core/rng.hpp"

namespace rovella {

template <class State>
struct Orbit {
  std::string map_id;
  State initial{};
  std::size_t burn_in = 0;
  std::size_t length = 0;  // requested number of kept samples
  std::vector<State> samples;
  std::uint64_t seed = 0;
  bool truncated = false;
  std::size_t truncation_index = 0;  // iterate count at which x = 0 was met
};

/// Iterates x0 burn_in times, then keeps N samples x_{burn_in}, ..., x_{burn_in+N-1}.
/// An iterate within kSingularTolerance of x = 0 stops the orbit and sets the
/// truncation flag; samples then holds what was collected before.
template <class Map>
Orbit<typename Map::state_type> iterate_orbit(const Map& map, typename Map::state_type x0, std::size_t N,
                                              std::size_t burn_in = 0, std::uint64_t seed = 0) {
  Orbit<typename Map::state_type> o;
  o.map_id = map.id();
  o.initial = x0;
  o.burn_in = burn_in;
  o.length = N;
  o.seed = seed;
  if (N == 0) return o;
  o.samples.reserve(N);
  auto x = x0;
  const std::size_t total = burn_in + N;
  for (std::size_t k = 0; k < total; ++k) {
    if (k >= burn_in) o.samples.push_back(x);
    if (k + 1 == total) break;
    try {
      x = map(x);
    } catch (const SingularPointError&) {
      o.truncated = true;
      o.truncation_index = k + 1;
      break;
    }
  }
  return o;
}

/// Orbit from a reference-measure initial point drawn from stream (seed, 0).
/// Initial points landing on x = 0 are redrawn.
template <class Map>
Orbit<typename Map::state_type> random_orbit(const Map& map, std::size_t N, std::size_t burn_in, std::uint64_t seed) {
  auto rng = make_stream(seed, 0);
  for (;;) {
    auto o = iterate_orbit(map, map.sample_reference(rng), N, burn_in, seed);
    if (!o.truncated) return o;
  }
}

/// Sampling plan for points distributed by the empirical invariant measure.
struct EnsembleConfig {
  std::size_t size = 100000;
  std::size_t chains = 64;
  std::size_t burn_in = 10000;  // 0: draw iid from the reference measure
  std::size_t stride = 16;      // iterates between kept samples of a chain
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Points from `chains` burnt-in orbits, every `stride`-th iterate, in chain order.
/// With burn_in = 0 the points are iid reference samples, which is exact for
/// maps whose reference measure is invariant (e.g. the doubling map).
/// A chain that meets x = 0 restarts from a fresh reference point.
template <class Map>
std::vector<typename Map::state_type> sample_invariant(const Map& map, const EnsembleConfig& cfg) {
  using State = typename Map::state_type;
  if (cfg.chains == 0 || cfg.stride == 0) throw ValidationError("sample_invariant: chains and stride must be positive");
  std::vector<State> out(cfg.size);
  const std::size_t chains = std::min(cfg.chains, std::max<std::size_t>(cfg.size, 1));
  parallel_for(chains, cfg.threads, [&](std::size_t c) {
    auto rng = make_stream(cfg.seed, c);
    const auto [lo, hi] = chunk_bounds(cfg.size, chains, c);
    if (cfg.burn_in == 0) {
      for (std::size_t i = lo; i < hi; ++i) out[i] = map.sample_reference(rng);
      return;
    }
    std::size_t i = lo;
    while (i < hi) {
      State x = map.sample_reference(rng);
      try {
        for (std::size_t k = 0; k < cfg.burn_in; ++k) x = map(x);
        while (i < hi) {
          for (std::size_t k = 0; k < cfg.stride; ++k) x = map(x);
          out[i++] = x;
        }
      } catch (const SingularPointError&) {
        // restart this chain segment from a new reference point
      }
    }
  });
  return out;
}

}  // namespace rovella
