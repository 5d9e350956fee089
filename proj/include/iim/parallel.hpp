#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace iim {

/// Worker cap from IIM_THREADS, else the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("IIM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(worker, task) for task in [0, tasks) on up to `workers` threads.
/// Tasks are claimed in a fixed round-robin pattern; fn must not depend on
/// which worker runs it for the result to be scheduling-independent.
template <typename Fn>
void parallel_tasks(std::size_t tasks, unsigned workers, Fn&& fn) {
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(tasks, 1)));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(0u, t);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < tasks; t += workers) fn(w, t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace iim
