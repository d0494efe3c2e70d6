#include "pbigraph/parallel.hpp"

#include <atomic>
#include <vector>

#include "pbigraph/error.hpp"

namespace pbg {

namespace {
std::atomic<unsigned> g_threads{1};
constexpr std::size_t kLeaf = 64;

double cascade(const double* x, std::size_t n) {
  if (n <= kLeaf) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return cascade(x, half) + cascade(x + half, n - half);
}
}  // namespace

void set_thread_count(unsigned n) { g_threads.store(n == 0 ? 1u : n); }

unsigned thread_count() { return g_threads.load(); }

namespace detail {
bool& in_parallel_region() {
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

double pairwise_sum(std::span<const double> xs) { return cascade(xs.data(), xs.size()); }

double weighted_dot(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
  require_length(b.size(), a.size(), "weighted_dot");
  if (!w.empty()) require_length(w.size(), a.size(), "weighted_dot weights");
  std::vector<double> terms(a.size());
  if (w.empty()) {
    for (std::size_t i = 0; i < a.size(); ++i) terms[i] = a[i] * b[i];
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) terms[i] = a[i] * b[i] * w[i];
  }
  return pairwise_sum(terms);
}

}  // namespace pbg
