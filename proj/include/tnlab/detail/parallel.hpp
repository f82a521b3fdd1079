#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tnlab {

template <typename Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
  if (workers <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  // Small chunks handed out dynamically: per-item cost is very uneven.
  const std::uint64_t chunk = std::max<std::uint64_t>(1, count / (std::uint64_t{workers} * 64));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    const unsigned n_threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
    for (unsigned w = 0; w < n_threads; ++w) {
      pool.emplace_back([&] {
        try {
          for (;;) {
            const std::uint64_t start = next.fetch_add(chunk);
            if (start >= count) return;
            const std::uint64_t stop = std::min(count, start + chunk);
            for (std::uint64_t i = start; i < stop; ++i) fn(i);
          }
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tnlab
