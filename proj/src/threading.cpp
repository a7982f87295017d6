#include "dmri/threading.h"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace dmri {
namespace {

std::atomic<int> g_threads{0};

int detect_threads() {
  if (const char* env = std::getenv("DMRI_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int thread_count() {
  const int n = g_threads.load();
  return n > 0 ? n : detect_threads();
}

void set_thread_count(int n) { g_threads.store(n > 0 ? n : 0); }

void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn) {
  if (n == 0) return;
  const size_t nt = std::min<size_t>(thread_count(), n);
  if (nt <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> workers;
  std::exception_ptr first_error;
  std::atomic<bool> has_error{false};
  auto run = [&](size_t begin, size_t end) {
    try {
      fn(begin, end);
    } catch (...) {
      if (!has_error.exchange(true)) first_error = std::current_exception();
    }
  };
  const size_t chunk = (n + nt - 1) / nt;
  for (size_t t = 1; t < nt; ++t) {
    const size_t begin = t * chunk;
    if (begin >= n) break;
    workers.emplace_back(run, begin, std::min(n, begin + chunk));
  }
  run(0, std::min(n, chunk));
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dmri
