#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace h8 {

/// Runs fn(begin, end) over contiguous chunks of [0, count) on up to
/// `workers` threads. Chunk boundaries never influence results as long as fn
/// writes only to its own index range; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t count, unsigned workers, F&& fn) {
  if (count == 0) return;
  const std::size_t n = std::clamp<std::size_t>(workers, 1, count);
  if (n == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (std::size_t w = 0; w < n; ++w) {
      const std::size_t begin = count * w / n;
      const std::size_t end = count * (w + 1) / n;
      pool.emplace_back([&, begin, end] {
        try {
          fn(begin, end);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace h8
