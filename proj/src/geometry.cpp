#include "pbigraph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "pbigraph/error.hpp"

namespace pbg {

// ---------------------------------------------------------------------------
// BoxDomain

BoxDomain::BoxDomain(std::vector<double> lo, std::vector<double> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  require_arg(!lo_.empty(), "BoxDomain: dimension must be >= 1");
  require_arg(lo_.size() == hi_.size(), "BoxDomain: lo/hi dimension mismatch");
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    require_arg(std::isfinite(lo_[k]) && std::isfinite(hi_[k]) && hi_[k] > lo_[k],
                "BoxDomain: need hi[k] > lo[k] on every axis");
  }
}

BoxDomain BoxDomain::unit(int d) {
  require_arg(d >= 1, "BoxDomain::unit: d must be >= 1");
  return BoxDomain(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) v *= side(k);
  return v;
}

double BoxDomain::diameter() const {
  double s = 0.0;
  for (int k = 0; k < dim(); ++k) s += side(k) * side(k);
  return std::sqrt(s);
}

double BoxDomain::min_side() const {
  double s = side(0);
  for (int k = 1; k < dim(); ++k) s = std::min(s, side(k));
  return s;
}

bool BoxDomain::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int k = 0; k < dim(); ++k)
    if (!(x[k] >= lo_[k] && x[k] <= hi_[k])) return false;
  return true;
}

double BoxDomain::distance_to_boundary(std::span<const double> x) const {
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim(); ++k) d = std::min({d, x[k] - lo_[k], hi_[k] - x[k]});
  return d;
}

// ---------------------------------------------------------------------------
// Density

Density Density::uniform(const BoxDomain& domain) {
  Density rho(domain);
  rho.kind_ = Kind::uniform;
  rho.rho_min_ = rho.rho_max_ = 1.0 / domain.volume();
  return rho;
}

Density Density::cosine(const BoxDomain& domain, double amplitude, int wavenumber, int axis) {
  require_arg(std::abs(amplitude) < 1.0, "cosine density: |amplitude| must be < 1");
  require_arg(wavenumber >= 1, "cosine density: wavenumber must be >= 1");
  require_arg(axis >= 0 && axis < domain.dim(), "cosine density: axis out of range");
  Density rho(domain);
  rho.kind_ = Kind::cosine;
  rho.params_ = {amplitude, static_cast<double>(wavenumber), static_cast<double>(axis)};
  rho.rho_min_ = (1.0 - std::abs(amplitude)) / domain.volume();
  rho.rho_max_ = (1.0 + std::abs(amplitude)) / domain.volume();
  return rho;
}

Density Density::tabulated(const BoxDomain& domain, std::vector<int> shape, std::vector<double> values) {
  require_arg(static_cast<int>(shape.size()) == domain.dim(), "tabulated density: shape rank must equal d");
  std::size_t cells = 1;
  for (int s : shape) {
    require_arg(s >= 1, "tabulated density: shape entries must be >= 1");
    cells *= static_cast<std::size_t>(s);
  }
  require_length(values.size(), cells, "tabulated density values");
  double cell_volume = domain.volume() / static_cast<double>(cells);
  double mass = 0.0;
  for (double v : values) {
    require(std::isfinite(v) && v > 0.0, ErrorCode::invalid_density, "tabulated density: values must be positive");
    mass += v * cell_volume;
  }
  Density rho(domain);
  rho.kind_ = Kind::tabulated;
  rho.table_shape_ = std::move(shape);
  rho.table_ = std::move(values);
  for (double& v : rho.table_) v /= mass;
  rho.rho_min_ = *std::min_element(rho.table_.begin(), rho.table_.end());
  rho.rho_max_ = *std::max_element(rho.table_.begin(), rho.table_.end());
  rho.params_.assign(rho.table_shape_.begin(), rho.table_shape_.end());
  return rho;
}

std::string Density::name() const {
  switch (kind_) {
    case Kind::uniform: return "uniform";
    case Kind::cosine: return "cosine";
    case Kind::tabulated: return "tabulated";
  }
  return "unknown";
}

double Density::operator()(std::span<const double> x) const {
  switch (kind_) {
    case Kind::uniform: return rho_min_;
    case Kind::cosine: {
      const int axis = static_cast<int>(params_[2]);
      const double t = (x[axis] - domain_.lo(axis)) / domain_.side(axis);
      return (1.0 + params_[0] * std::cos(2.0 * std::numbers::pi * params_[1] * t)) / domain_.volume();
    }
    case Kind::tabulated: {
      std::size_t idx = 0;
      for (int k = 0; k < domain_.dim(); ++k) {
        const int s = table_shape_[k];
        int c = static_cast<int>(std::floor((x[k] - domain_.lo(k)) / domain_.side(k) * s));
        c = std::clamp(c, 0, s - 1);
        idx = idx * static_cast<std::size_t>(s) + static_cast<std::size_t>(c);
      }
      return table_[idx];
    }
  }
  return 0.0;
}

void Density::gradient(std::span<const double> x, std::span<double> g) const {
  require(has_gradient(), ErrorCode::invalid_density, "density '" + name() + "' has no classical gradient");
  std::fill(g.begin(), g.end(), 0.0);
  if (kind_ == Kind::cosine) {
    const int axis = static_cast<int>(params_[2]);
    const double w = 2.0 * std::numbers::pi * params_[1] / domain_.side(axis);
    const double t = x[axis] - domain_.lo(axis);
    g[axis] = -params_[0] * w * std::sin(w * t) / domain_.volume();
  }
}

// ---------------------------------------------------------------------------
// PointCloud and sampling

PointCloud sort_spatially(const PointCloud& cloud) {
  const int d = cloud.dim();
  const std::size_t n = cloud.size();
  const int bits = std::min(20, 63 / d);
  const double levels = static_cast<double>((std::uint64_t{1} << bits) - 1);
  std::vector<std::uint64_t> code(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = cloud.point(i);
    std::uint64_t c = 0;
    std::vector<std::uint64_t> q(d);
    for (int k = 0; k < d; ++k) {
      const double t = (x[k] - cloud.domain.lo(k)) / cloud.domain.side(k);
      q[k] = static_cast<std::uint64_t>(std::clamp(t, 0.0, 1.0) * levels);
    }
    for (int b = bits - 1; b >= 0; --b)
      for (int k = 0; k < d; ++k) c = (c << 1) | ((q[k] >> b) & 1u);
    code[i] = c;
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return code[a] < code[b]; });
  std::vector<double> pos(cloud.positions.size());
  for (std::size_t t = 0; t < n; ++t)
    std::copy_n(cloud.positions.begin() + static_cast<std::ptrdiff_t>(perm[t] * d), d,
                pos.begin() + static_cast<std::ptrdiff_t>(t * d));
  return PointCloud{cloud.domain, std::move(pos), cloud.seed};
}

PointCloud PointCloud::from_positions(BoxDomain domain, std::vector<double> positions, std::uint64_t seed) {
  const auto d = static_cast<std::size_t>(domain.dim());
  require_arg(positions.size() % d == 0, "PointCloud: position count is not a multiple of d");
  require_arg(!positions.empty(), "PointCloud: need at least one point");
  PointCloud cloud{std::move(domain), std::move(positions), seed};
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    require_arg(cloud.domain.contains(cloud.point(i)), "PointCloud: point " + std::to_string(i) + " lies outside the domain");
  }
  return cloud;
}

PointCloud sample_point_cloud(const BoxDomain& domain, const Density& density, long long n, std::uint64_t seed) {
  require_arg(n >= 1, "sample_point_cloud: n must be >= 1");
  require(density.min_value() > 0.0 && std::isfinite(density.max_value()), ErrorCode::invalid_density,
          "sample_point_cloud: density bounds must be positive and finite");
  require_arg(density.domain() == domain, "sample_point_cloud: density is defined on a different domain");

  constexpr int kMaxConsecutiveRejects = 10000;
  const int d = domain.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double envelope = density.max_value();

  PointCloud cloud{domain, {}, seed};
  cloud.positions.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  std::vector<double> x(static_cast<std::size_t>(d));
  for (long long i = 0; i < n; ++i) {
    int rejects = 0;
    for (;;) {
      for (int k = 0; k < d; ++k) x[k] = domain.lo(k) + domain.side(k) * unit(rng);
      if (unit(rng) * envelope < density(x)) break;
      if (++rejects >= kMaxConsecutiveRejects) {
        fail(ErrorCode::invalid_density, "sample_point_cloud: 10^4 consecutive rejections; density is invalid");
      }
    }
    cloud.positions.insert(cloud.positions.end(), x.begin(), x.end());
  }
  return cloud;
}


// ---------------------------------------------------------------------------
// NeighborIndex

NeighborIndex::NeighborIndex(const PointCloud& cloud, double cell_size)
    : d_(cloud.dim()), n_(cloud.size()), cell_size_(cell_size), lo_(cloud.domain.lo()), positions_(cloud.positions) {
  require_arg(cell_size > 0.0 && std::isfinite(cell_size), "NeighborIndex: radius must be > 0");
  require_arg(n_ < std::numeric_limits<std::uint32_t>::max(), "NeighborIndex: too many points");
  counts_.resize(static_cast<std::size_t>(d_));
  double total = 1.0;
  for (int k = 0; k < d_; ++k) {
    counts_[k] = static_cast<std::int64_t>(std::floor(cloud.domain.side(k) / cell_size)) + 1;
    total *= static_cast<double>(counts_[k]);
  }
  require_arg(total < 4.0e18, "NeighborIndex: radius too small for the domain");

  std::vector<std::uint64_t> keys(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto c = cell_of(point(i));
    std::uint64_t key = 0;
    key_of(c, key);
    keys[i] = key;
  }
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), 0u);
  std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) { return keys[a] < keys[b]; });

  sorted_.resize(positions_.size());
  for (std::size_t t = 0; t < n_; ++t)
    std::copy_n(positions_.begin() + static_cast<std::ptrdiff_t>(order_[t]) * d_, d_,
                sorted_.begin() + static_cast<std::ptrdiff_t>(t) * d_);

  dense_ = total <= static_cast<double>(16 * n_ + 4096);
  if (dense_) {
    dense_start_.assign(static_cast<std::size_t>(total) + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) ++dense_start_[keys[i] + 1];
    for (std::size_t c = 1; c < dense_start_.size(); ++c) dense_start_[c] += dense_start_[c - 1];
  } else {
    for (std::size_t pos = 0; pos < n_;) {
      const std::uint64_t key = keys[order_[pos]];
      std::size_t end = pos;
      while (end < n_ && keys[order_[end]] == key) ++end;
      sparse_.emplace(key, std::make_pair(static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(end)));
      pos = end;
    }
  }
}

std::vector<std::int64_t> NeighborIndex::cell_of(std::span<const double> x) const {
  std::vector<std::int64_t> c(static_cast<std::size_t>(d_));
  for (int k = 0; k < d_; ++k) c[k] = static_cast<std::int64_t>(std::floor((x[k] - lo_[k]) / cell_size_));
  return c;
}

bool NeighborIndex::key_of(std::span<const std::int64_t> cell, std::uint64_t& key) const {
  key = 0;
  for (int k = 0; k < d_; ++k) {
    if (cell[k] < 0 || cell[k] >= counts_[k]) return false;
    key = key * static_cast<std::uint64_t>(counts_[k]) + static_cast<std::uint64_t>(cell[k]);
  }
  return true;
}

std::pair<std::uint32_t, std::uint32_t> NeighborIndex::range_by_key(std::uint64_t key) const {
  if (dense_) return {dense_start_[key], dense_start_[key + 1]};
  auto it = sparse_.find(key);
  if (it == sparse_.end()) return {0, 0};
  return it->second;
}

std::span<const std::uint32_t> NeighborIndex::bucket_by_key(std::uint64_t key) const {
  const auto [b, e] = range_by_key(key);
  return {order_.data() + b, static_cast<std::size_t>(e - b)};
}

std::span<const std::uint32_t> NeighborIndex::bucket(std::span<const std::int64_t> cell) const {
  std::uint64_t key;
  if (!key_of(cell, key)) return {};
  return bucket_by_key(key);
}

std::size_t NeighborIndex::occupied_buckets() const {
  if (!dense_) return sparse_.size();
  std::size_t count = 0;
  for (std::size_t c = 0; c + 1 < dense_start_.size(); ++c)
    if (dense_start_[c + 1] > dense_start_[c]) ++count;
  return count;
}

std::vector<std::uint32_t> NeighborIndex::neighbors(std::size_t i) const {
  require_arg(i < n_, "NeighborIndex::neighbors: id out of range");
  std::vector<std::uint32_t> out;
  for_each_within(point(i), cell_size_, [&](std::uint32_t j, double) {
    if (j != i) out.push_back(j);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> NeighborIndex::query(std::span<const double> x, double radius) const {
  require_arg(radius > 0.0 && radius <= cell_size_, "NeighborIndex::query: radius must lie in (0, cell_size]");
  std::vector<std::uint32_t> out;
  for_each_within(x, radius, [&](std::uint32_t j, double) { out.push_back(j); });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t NeighborIndex::nearest(std::span<const double> x) const {
  const auto base = cell_of(x);
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_id = std::numeric_limits<std::uint32_t>::max();
  std::int64_t max_ring = 0;
  for (int k = 0; k < d_; ++k) {
    max_ring = std::max({max_ring, std::abs(base[k]) + 1, std::abs(counts_[k] - base[k]) + 1});
  }
  std::vector<std::int64_t> cell(static_cast<std::size_t>(d_));
  std::vector<std::int64_t> off(static_cast<std::size_t>(d_));
  for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
    // Visit the cells whose Chebyshev offset from the base cell equals `ring`.
    std::fill(off.begin(), off.end(), -ring);
    for (;;) {
      std::int64_t cheb = 0;
      for (int k = 0; k < d_; ++k) cheb = std::max(cheb, std::abs(off[k]));
      if (cheb == ring) {
        for (int k = 0; k < d_; ++k) cell[k] = base[k] + off[k];
        std::uint64_t key;
        if (key_of(cell, key)) {
          for (std::uint32_t j : bucket_by_key(key)) {
            const double dd = squared_distance(x, point(j));
            if (dd < best || (dd == best && j < best_id)) {
              best = dd;
              best_id = j;
            }
          }
        }
      }
      int k = 0;
      while (k < d_ && off[k] == ring) off[k++] = -ring;
      if (k == d_) break;
      ++off[k];
    }
    // Unvisited samples lie in rings > ring, hence at distance >= ring * cell_size.
    const double reach = static_cast<double>(ring) * cell_size_;
    if (best_id != std::numeric_limits<std::uint32_t>::max() && best < reach * reach) break;
  }
  return best_id;
}

}  // namespace pbg
