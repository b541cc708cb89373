#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace f2lab {

// Worker count used by partitionable searches; the CLI sets it from --workers.
int& default_workers();

// Runs fn(worker) for worker in [0, workers) on separate threads and
// rethrows the first exception. Callers reduce per-worker results in worker
// order so the outcome does not depend on scheduling.
template <class Fn>
void run_workers(int workers, Fn&& fn) {
  workers = std::max(1, workers);
  if (workers == 1) {
    fn(0);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace f2lab
