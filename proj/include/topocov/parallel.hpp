#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace topocov {

// Half-open slice [begin, end) of a range of `total` items split into `chunks` nearly equal
// contiguous slices. The layout depends only on (total, chunks), never on the worker count.
struct Chunk {
  std::size_t index;
  std::size_t begin;
  std::size_t end;
};

inline Chunk chunk_bounds(std::size_t total, std::size_t chunks, std::size_t index) {
  const std::size_t base = total / chunks;
  const std::size_t extra = total % chunks;
  const std::size_t begin = index * base + std::min(index, extra);
  return {index, begin, begin + base + (index < extra ? 1 : 0)};
}

// Runs fn(Chunk) for every chunk on up to `workers` threads. Chunks are claimed dynamically,
// so callers must write results into per-chunk slots and combine them in chunk order.
template <typename Fn>
void for_each_chunk(std::size_t total, std::size_t chunks, std::size_t workers, Fn&& fn) {
  chunks = std::max<std::size_t>(1, chunks);
  workers = std::clamp<std::size_t>(workers, 1, chunks);
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c)
      fn(chunk_bounds(total, chunks, c));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t c; (c = next.fetch_add(1)) < chunks;)
            fn(chunk_bounds(total, chunks, c));
        } catch (...) {
          errors[w] = std::current_exception();
          next = chunks;
        }
      });
  }
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace topocov
