#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lapsim {

/// Runs body(0..task_count-1) across a worker pool. jobs <= 0 selects one
/// worker per hardware thread. The first exception thrown by any task is
/// rethrown after all workers stop picking up new tasks. Tasks must not
/// depend on execution order.
inline void run_parallel(size_t task_count, int jobs,
                         const std::function<void(size_t)>& body) {
  int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1)
    workers = 1;
  if (static_cast<size_t>(workers) > task_count)
    workers = static_cast<int>(task_count);
  if (workers <= 1) {
    for (size_t i = 0; i < task_count; ++i)
      body(i);
    return;
  }

  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= task_count)
        return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back(worker);
  for (std::thread& t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace lapsim
