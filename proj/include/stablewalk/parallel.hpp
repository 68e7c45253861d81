#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stablewalk {

/// Default worker count: STABLEWALK_WORKERS if set, else hardware threads.
int default_workers();

/// Runs fn(r) for r in [0, count) on `workers` threads and returns the
/// results indexed by r. Scheduling never affects the output: each result
/// lands in its own slot and callers reduce in index order.
template <class T, class Fn>
std::vector<T> run_indexed(std::size_t count, int workers, Fn&& fn) {
  std::vector<T> out(count);
  const std::size_t threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t r = 0; r < count; ++r) out[r] = fn(r);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= count) return;
      try {
        out[r] = fn(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace stablewalk
