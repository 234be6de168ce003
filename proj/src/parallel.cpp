#include "normlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace normlab {

int max_workers() {
  static const int cached = [] {
    if (const char* env = std::getenv("LAB_THREADS")) {
      const long parsed = std::strtol(env, nullptr, 10);
      if (parsed >= 1) return static_cast<int>(std::min(parsed, 64L));
      return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
  }();
  return cached;
}

void parallel_chunks(int chunk_count, const std::function<void(int)>& fn) {
  const int workers = std::min(max_workers(), chunk_count);
  if (workers <= 1) {
    for (int c = 0; c < chunk_count; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= chunk_count) return;
        fn(c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace normlab
