#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace botdetect {

/// Worker count: $BOTDETECT_WORKERS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
std::size_t default_worker_count();

/// Evaluates fn(i) for i in [0, count) on up to `workers` threads and returns
/// the results in index order. The first exception thrown by any task is
/// rethrown after all workers have stopped.
template <typename Fn>
auto parallel_map(std::size_t count, Fn&& fn, std::size_t workers = default_worker_count())
    -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> results(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  const std::size_t spawn = std::min(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace botdetect
