#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace depthlab::detail {

/// Runs fn(block) for block = 0..blocks-1 on up to `threads` workers
/// (0 = hardware concurrency). Callers reduce per-block results in block
/// order, so output does not depend on the worker count.
template <class Fn>
void parallel_blocks(std::size_t blocks, Fn&& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < blocks; b = next++) fn(b);
    });
  }
}

}  // namespace depthlab::detail
