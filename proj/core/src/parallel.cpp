#include "repstab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace repstab {

std::size_t worker_count() {
  if (const char* env = std::getenv("REPSTAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

double parallel_max(std::size_t count, const std::function<double(std::size_t)>& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(worker_count(), count));
  std::vector<double> partial(workers, 0.0);
  const std::size_t chunk = count == 0 ? 0 : (count + workers - 1) / workers;
  parallel_for(workers, [&](std::size_t w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, fn(i));
    partial[w] = m;
  });
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace repstab
