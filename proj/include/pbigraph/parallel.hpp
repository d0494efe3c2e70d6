#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace pbg {

/// Worker count used by parallel_for. Defaults to 1; the CLI sets it from
/// --threads.
void set_thread_count(unsigned n);
unsigned thread_count();

namespace detail {
bool& in_parallel_region();
}

/// Runs body(begin, end) over disjoint chunks of [0, n). Bodies must only write
/// to their own index range. Nested calls run serially inside the caller's
/// worker.
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_chunk = 256) {
  const unsigned workers = thread_count();
  if (workers <= 1 || n < 2 * min_chunk || detail::in_parallel_region()) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(workers, (n + min_chunk - 1) / min_chunk);
  const std::size_t per = (n + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(chunks);
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t b = c * per;
    const std::size_t e = std::min(n, b + per);
    pool.emplace_back([&, b, e, c] {
      detail::in_parallel_region() = true;
      try {
        if (b < e) body(b, e);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

/// Pairwise (cascade) summation. The association order depends only on the
/// length, so results do not change with the worker count.
double pairwise_sum(std::span<const double> xs);

/// sum_i a_i * b_i * w_i with pairwise reduction (w may be empty for unit
/// weights).
double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> w = {});

}  // namespace pbg
