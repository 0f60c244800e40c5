// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fhv {

/// Execution knob shared by capture and reconstruction. `threads == 1` is the
/// sequential reference mode that defines canonical ordering.
struct Execution {
  unsigned threads = 1;

  bool sequential() const { return threads <= 1; }
};

/// Splits [0, count) into `threads` contiguous chunks and calls
/// fn(begin, end, chunk_index) for each. Chunk i always covers the same range
/// for a given (count, threads), so per-chunk results can be merged in order.
/// The first exception thrown by any chunk is rethrown on the caller.
template <typename Fn>
void parallel_chunks(std::size_t count, Execution exec, Fn&& fn) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(exec.threads, count));
  if (chunks == 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t begin = count * c / chunks;
      const std::size_t end = count * (c + 1) / chunks;
      workers.emplace_back([&, begin, end, c] {
        try {
          fn(begin, end, c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline std::size_t chunk_count(std::size_t count, Execution exec) {
  return std::max<std::size_t>(1, std::min<std::size_t>(exec.threads, count));
}

}  // namespace fhv
