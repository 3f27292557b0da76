#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace robustci {

// Worker count requested through ROBUSTCI_THREADS, capped by the hardware.
// Unset or invalid values mean a single worker.
inline unsigned thread_count_from_env() {
  const char* raw = std::getenv("ROBUSTCI_THREADS");
  if (!raw) return 1;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1) return 1;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return std::min(static_cast<unsigned>(v), hw);
}

// Runs body(chunk_begin, chunk_end, chunk_index) over [0, total) in `threads`
// contiguous chunks. Callers merge per-chunk results by chunk index, so the
// outcome never depends on scheduling.
template <class Body>
void parallel_chunks(std::size_t total, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || total < 2 * threads) {
    body(std::size_t{0}, total, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t step = (total + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(total, t * step);
    const std::size_t hi = std::min(total, lo + step);
    pool.emplace_back([&body, lo, hi, t] { body(lo, hi, std::size_t{t}); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace robustci
