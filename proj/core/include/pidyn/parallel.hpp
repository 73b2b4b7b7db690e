#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pidyn {

/// Runs body(index, worker) for index in [0, count). Worker w owns the
/// indices w, w + W, w + 2W, ...; callers write results into slots keyed by
/// index, so the outcome does not depend on W or on scheduling. The first
/// exception thrown by any worker is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  const unsigned w = std::max(1u, std::min<unsigned>(
                                      workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (w == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i, 0u);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (unsigned worker = 0; worker < w; ++worker) {
      pool.emplace_back([&, worker] {
        try {
          for (std::size_t i = worker; i < count; i += w) body(i, worker);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pidyn
