// Deterministic chunked parallel loop: chunk c always covers the same index
// range, so callers that write per-chunk results and merge them in chunk order
// get the same answer for any worker count.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace collide_sic {

inline std::size_t resolve_jobs(std::size_t jobs) {
  if (jobs != 0) return jobs;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Calls fn(chunk, begin, end) for every chunk of [0, count).
template <typename Fn>
void parallel_chunks(std::uint64_t count, std::uint64_t chunk_size, std::size_t jobs, Fn&& fn) {
  if (count == 0) return;
  chunk_size = std::max<std::uint64_t>(chunk_size, 1);
  const auto chunks = (count + chunk_size - 1) / chunk_size;
  auto body = [&](std::uint64_t c) { fn(c, c * chunk_size, std::min(count, (c + 1) * chunk_size)); };

  const auto workers = std::min<std::uint64_t>(resolve_jobs(jobs), chunks);
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (auto c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
        try {
          body(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = chunks;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace collide_sic
