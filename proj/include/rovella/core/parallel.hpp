#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace rovella {

/// 0 means "not specified": fall back to ROVELLA_THREADS, then to 1.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ROVELLA_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Runs fn(task) for task in [0, n_tasks) on `threads` workers with a fixed
/// round-robin assignment. Callers write results into per-task slots and merge
/// them in task order, which keeps results independent of the worker count.
/// The exception of the lowest failing task is rethrown.
template <class Fn>
void parallel_for(std::size_t n_tasks, unsigned threads, Fn&& fn) {
  if (n_tasks == 0) return;
  const std::size_t workers = std::min<std::size_t>(threads == 0 ? 1 : threads, n_tasks);
  if (workers == 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::vector<std::exception_ptr> errors(n_tasks);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < n_tasks; t += workers) {
        try {
          fn(t);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Split [0, n) into `parts` contiguous chunks; returns the bounds of chunk k.
inline std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t n, std::size_t parts, std::size_t k) {
  return {n * k / parts, n * (k + 1) / parts};
}

}  // namespace rovella
