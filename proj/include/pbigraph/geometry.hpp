#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pbg {

/// Axis-aligned box [lo, hi] in R^d.
class BoxDomain {
 public:
  BoxDomain(std::vector<double> lo, std::vector<double> hi);

  static BoxDomain unit(int d);

  int dim() const { return static_cast<int>(lo_.size()); }
  double lo(int k) const { return lo_[k]; }
  double hi(int k) const { return hi_[k]; }
  double side(int k) const { return hi_[k] - lo_[k]; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  double volume() const;
  double diameter() const;
  double min_side() const;
  /// Closed-box containment.
  bool contains(std::span<const double> x) const;
  /// Euclidean distance from an interior point to the boundary.
  double distance_to_boundary(std::span<const double> x) const;

  bool operator==(const BoxDomain&) const = default;

 private:
  std::vector<double> lo_, hi_;
};

/// Probability density on a box with positive lower and upper bounds.
///
///   uniform     rho = 1/|Omega|
///   cosine      rho = (1 + a cos(2 pi k (x_axis - lo)/L_axis)) / |Omega|, |a| < 1
///   tabulated   piecewise constant on a cell grid, normalized to unit mass
class Density {
 public:
  enum class Kind { uniform, cosine, tabulated };

  static Density uniform(const BoxDomain& domain);
  static Density cosine(const BoxDomain& domain, double amplitude, int wavenumber = 1, int axis = 0);
  static Density tabulated(const BoxDomain& domain, std::vector<int> shape, std::vector<double> values);

  Kind kind() const { return kind_; }
  std::string name() const;
  const BoxDomain& domain() const { return domain_; }
  const std::vector<double>& params() const { return params_; }

  double operator()(std::span<const double> x) const;
  /// False for tabulated densities (piecewise constant, no classical gradient).
  bool has_gradient() const { return kind_ != Kind::tabulated; }
  void gradient(std::span<const double> x, std::span<double> g) const;

  double min_value() const { return rho_min_; }
  double max_value() const { return rho_max_; }
  bool is_constant() const { return kind_ == Kind::uniform; }

 private:
  explicit Density(BoxDomain domain) : domain_(std::move(domain)) {}

  BoxDomain domain_;
  Kind kind_ = Kind::uniform;
  std::vector<double> params_;
  std::vector<int> table_shape_;
  std::vector<double> table_;
  double rho_min_ = 0.0, rho_max_ = 0.0;
};

/// n sample positions stored row-major (n x d).
struct PointCloud {
  BoxDomain domain;
  std::vector<double> positions;
  std::uint64_t seed = 0;

  std::size_t size() const { return positions.size() / static_cast<std::size_t>(domain.dim()); }
  int dim() const { return domain.dim(); }
  std::span<const double> point(std::size_t i) const {
    const auto d = static_cast<std::size_t>(domain.dim());
    return {positions.data() + i * d, d};
  }

  /// Validates shape and containment.
  static PointCloud from_positions(BoxDomain domain, std::vector<double> positions, std::uint64_t seed = 0);
};

/// Draws n i.i.d. samples from `density` by rejection against the envelope
/// rho_max. Deterministic for a fixed seed.
PointCloud sample_point_cloud(const BoxDomain& domain, const Density& density, long long n, std::uint64_t seed);

/// Same points reordered along a Z-order (Morton) curve, which keeps
/// spatial neighbors close in memory. The point set is unchanged.
PointCloud sort_spatially(const PointCloud& cloud);

/// Strict "within" predicate shared by every neighborhood construction.
inline bool within_radius(double dist2, double radius) { return dist2 < radius * radius; }

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

/// Uniform cell list with cell size equal to the query radius.
class NeighborIndex {
 public:
  NeighborIndex(const PointCloud& cloud, double cell_size);

  double cell_size() const { return cell_size_; }
  std::size_t size() const { return n_; }
  int dim() const { return d_; }

  /// Ids j != i with |x_i - x_j| < cell_size, ascending.
  std::vector<std::uint32_t> neighbors(std::size_t i) const;
  /// Ids j with |x - x_j| < radius (radius <= cell_size), ascending.
  std::vector<std::uint32_t> query(std::span<const double> x, double radius) const;
  /// Nearest sample to x; ties go to the lowest id.
  std::uint32_t nearest(std::span<const double> x) const;

  /// Calls f(j, dist2) for every j with dist2 < radius^2 (radius <= cell_size),
  /// in bucket order.
  template <class F>
  void for_each_within(std::span<const double> x, double radius, F&& f) const {
    for_each_slot_within(x, radius, [&](std::uint32_t t, double dd) { f(order_[t], dd); });
  }

  /// Like for_each_within, but passes the bucket-order slot t instead of the
  /// point id (the id is order()[t]).
  template <class F>
  void for_each_slot_within(std::span<const double> x, double radius, F&& f) const;

  /// Point ids in bucket order.
  std::span<const std::uint32_t> order() const { return order_; }

  std::vector<std::int64_t> cell_of(std::span<const double> x) const;
  std::span<const std::uint32_t> bucket(std::span<const std::int64_t> cell) const;
  std::size_t occupied_buckets() const;
  std::span<const double> point(std::size_t i) const {
    return {positions_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }

 private:
  bool key_of(std::span<const std::int64_t> cell, std::uint64_t& key) const;
  std::span<const std::uint32_t> bucket_by_key(std::uint64_t key) const;
  std::pair<std::uint32_t, std::uint32_t> range_by_key(std::uint64_t key) const;

  int d_ = 0;
  std::size_t n_ = 0;
  double cell_size_ = 0.0;
  std::vector<double> lo_;
  std::vector<double> positions_;
  std::vector<std::int64_t> counts_;
  std::vector<std::uint32_t> order_;
  std::vector<double> sorted_;  // positions permuted into bucket order
  bool dense_ = true;
  std::vector<std::uint32_t> dense_start_;
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> sparse_;
};

template <class F>
void NeighborIndex::for_each_slot_within(std::span<const double> x, double radius, F&& f) const {
  const auto base = cell_of(x);
  std::vector<std::int64_t> cell(static_cast<std::size_t>(d_));
  std::vector<int> off(static_cast<std::size_t>(d_), -1);
  const double r2 = radius * radius;
  for (;;) {
    for (int k = 0; k < d_; ++k) cell[k] = base[k] + off[k];
    std::uint64_t key;
    if (key_of(cell, key)) {
      const auto [b, e] = range_by_key(key);
      const double* p = sorted_.data() + static_cast<std::size_t>(b) * d_;
      for (std::uint32_t t = b; t < e; ++t, p += d_) {
        double dd = 0.0;
        for (int k = 0; k < d_; ++k) {
          const double z = x[k] - p[k];
          dd += z * z;
        }
        if (dd < r2) f(t, dd);
      }
    }
    int k = 0;
    while (k < d_ && off[k] == 1) off[k++] = -1;
    if (k == d_) break;
    ++off[k];
  }
}

}  // namespace pbg
