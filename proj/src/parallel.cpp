#include "hyperlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace hyperlab {

namespace {
std::atomic<int> g_default_threads{1};
}

int default_threads() { return g_default_threads.load(); }

void set_default_threads(int threads) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  g_default_threads.store(threads);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 0) threads = default_threads();
  const std::size_t workers = std::min<std::size_t>(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  const std::size_t chunk = std::max<std::size_t>(1, count / (workers * 16));
  auto work = [&] {
    while (true) {
      const std::size_t start = next.fetch_add(chunk);
      if (start >= count) return;
      const std::size_t stop = std::min(count, start + chunk);
      for (std::size_t i = start; i < stop; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace hyperlab
