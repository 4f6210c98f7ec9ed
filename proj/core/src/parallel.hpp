#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "metareduce/errors.hpp"

namespace metareduce::detail {

// Runs fn(begin, end, chunk) over contiguous chunks of [0, n). Chunk
// boundaries depend only on n, so callers merging per-chunk results in
// chunk order get thread-count independent output.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunks, Fn fn) {
  if (n == 0) return;
  chunks = std::max<std::size_t>(1, std::min(chunks, n));
  std::size_t per = (n + chunks - 1) / chunks;
  unsigned workers = std::min<unsigned>(thread_count(),
                                        static_cast<unsigned>(chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c)
      fn(std::min(n, c * per), std::min(n, (c + 1) * per), c);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) {
        try {
          fn(std::min(n, c * per), std::min(n, (c + 1) * per), c);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace metareduce::detail
