#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace gvfls {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> n{1};
  return n;
}
}  // namespace detail

/// Number of worker threads used by row-parallel stencils. 0 selects hardware concurrency.
inline void set_thread_count(unsigned n) { detail::thread_setting() = n; }

inline unsigned thread_count() {
  unsigned n = detail::thread_setting();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

/// Runs fn(row) for every row in [0, rows). Each row writes only its own
/// outputs, so results do not depend on the thread count.
template <class Fn>
void for_rows(std::size_t rows, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), rows);
  // Small grids are not worth the spawn cost.
  if (workers <= 1 || rows < 32) {
    for (std::size_t r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t r = w; r < rows; r += workers) fn(r);
    });
  }
}

/// Deterministic row reduction: per-row partials are summed in row order.
template <class Fn>
double sum_rows(std::size_t rows, Fn&& row_sum) {
  std::vector<double> partial(rows, 0.0);
  for_rows(rows, [&](std::size_t r) { partial[r] = row_sum(r); });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace gvfls
