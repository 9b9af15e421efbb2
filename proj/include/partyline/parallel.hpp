// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace partyline {

namespace detail {

inline std::atomic<std::size_t>& thread_cap() {
  static std::atomic<std::size_t> cap{0};
  return cap;
}

inline bool& inside_worker() {
  thread_local bool flag = false;
  return flag;
}

}  // namespace detail

/// Caps worker parallelism. 0 restores the default (PARTYLINE_THREADS, else
/// hardware concurrency).
inline void set_max_threads(std::size_t n) { detail::thread_cap() = n; }

inline std::size_t max_threads() {
  if (const auto cap = detail::thread_cap().load(); cap > 0) return cap;
  if (const char* env = std::getenv("PARTYLINE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on up to max_threads() workers. Work is split
/// into contiguous blocks; callers write results into slot i so the outcome
/// never depends on scheduling. Nested calls run sequentially. The first
/// exception thrown by any task is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min(n, detail::inside_worker() ? 1 : max_threads());
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t block = std::max<std::size_t>(1, n / (workers * 8));

  auto body = [&] {
    detail::inside_worker() = true;
    try {
      for (;;) {
        const std::size_t start = next.fetch_add(block);
        if (start >= n) break;
        const std::size_t stop = std::min(n, start + block);
        for (std::size_t i = start; i < stop; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
    detail::inside_worker() = false;
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace partyline
