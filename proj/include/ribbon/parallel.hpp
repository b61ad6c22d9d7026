#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rib {

/// Splits [0, n) into at most `workers` contiguous chunks and runs
/// fn(begin, end) on each, joining before returning. Chunk boundaries depend
/// only on n and workers, so any merge keyed by item index is deterministic.
inline void parallel_chunks(std::size_t n, int workers,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  if (workers < 1) workers = 1;
  std::size_t w = static_cast<std::size_t>(workers);
  if (w > n) w = n == 0 ? 1 : n;
  if (w <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  std::size_t chunk = n / w, rem = n % w, begin = 0;
  for (std::size_t t = 0; t < w; ++t) {
    std::size_t end = begin + chunk + (t < rem ? 1 : 0);
    threads.emplace_back(fn, begin, end);
    begin = end;
  }
  for (auto& th : threads) th.join();
}

}  // namespace rib
