#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pbigraph/geometry.hpp"

namespace pbg::test {

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng);
  return v;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double sup_norm(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline PointCloud uniform_cloud(long long n, std::uint64_t seed, int d = 2) {
  const auto dom = BoxDomain::unit(d);
  return sample_point_cloud(dom, Density::uniform(dom), n, seed);
}

// The three-point line used by several hand-checked examples.
inline PointCloud three_points() {
  return PointCloud::from_positions(BoxDomain({0.0, -1.0}, {2.0, 1.0}), {0.0, 0.0, 0.5, 0.0, 2.0, 0.0});
}

}  // namespace pbg::test

#define EXPECT_CODE(stmt, expected)                         \
  do {                                                  \
    try {                                               \
      stmt;                                             \
      ADD_FAILURE() << "no exception from " #stmt;      \
    } catch (const pbg::Error& e) {                     \
      EXPECT_EQ(e.code(), expected) << e.what();            \
    }                                                   \
  } while (0)
