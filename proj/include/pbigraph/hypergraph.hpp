#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pbigraph/geometry.hpp"

namespace pbg {

/// One oriented hyperarc: nonempty, disjoint output and input vertex sets.
struct Hyperarc {
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> in;
};

/// Oriented hypergraph on vertices 0..n-1. Arcs are stored in compressed
/// form, with reverse indices from each vertex to the arcs that contain it.
class OrientedHypergraph {
 public:
  /// Validates that every arc has nonempty, disjoint, in-range vertex sets.
  static OrientedHypergraph from_arcs(std::size_t n, const std::vector<Hyperarc>& arcs);

  std::size_t n() const { return n_; }
  std::size_t arc_count() const { return out_ptr_.size() - 1; }

  std::span<const std::uint32_t> out(std::size_t a) const { return slice(out_ptr_, out_ids_, a); }
  std::span<const std::uint32_t> in(std::size_t a) const { return slice(in_ptr_, in_ids_, a); }
  /// |a^in| / |a^out|.
  double ratio(std::size_t a) const { return ratio_[a]; }

  /// Arcs whose input set contains v, ascending.
  std::span<const std::uint32_t> arcs_with_input(std::size_t v) const { return slice(rin_ptr_, rin_ids_, v); }
  /// Arcs whose output set contains v, ascending.
  std::span<const std::uint32_t> arcs_with_output(std::size_t v) const { return slice(rout_ptr_, rout_ids_, v); }

  /// Vertices that received no arc because their input set would be empty.
  const std::vector<std::uint32_t>& dropped() const { return dropped_; }

  /// One line per arc: "out_ids | in_ids".
  void dump(std::ostream& os) const;

 private:
  friend OrientedHypergraph build_hypergraph(const PointCloud& cloud, double eps);

  static std::span<const std::uint32_t> slice(const std::vector<std::uint64_t>& ptr,
                                              const std::vector<std::uint32_t>& ids, std::size_t k) {
    return {ids.data() + ptr[k], static_cast<std::size_t>(ptr[k + 1] - ptr[k])};
  }
  void build_reverse();

  std::size_t n_ = 0;
  std::vector<std::uint64_t> out_ptr_{0}, in_ptr_{0};
  std::vector<std::uint32_t> out_ids_, in_ids_;
  std::vector<double> ratio_;
  std::vector<std::uint64_t> rin_ptr_, rout_ptr_;
  std::vector<std::uint32_t> rin_ids_, rout_ids_;
  std::vector<std::uint32_t> dropped_;
};

/// a_i = ({x_i}, {x_j : 0 < |x_i - x_j| < eps}); vertices without neighbors
/// are dropped and recorded.
OrientedHypergraph build_hypergraph(const PointCloud& cloud, double eps);

/// grad_H f(a) = sum_{v in a^in} f(v) - (|a^in|/|a^out|) sum_{v in a^out} f(v).
std::vector<double> hyper_gradient(const OrientedHypergraph& h, std::span<const double> f);

/// grad*_H G(v) = sum_{a: v in a^in} G(a) - sum_{a: v in a^out} (|a^in|/|a^out|) G(a).
std::vector<double> hyper_adjoint(const OrientedHypergraph& h, std::span<const double> g);

/// div_H = -grad*_H.
std::vector<double> hyper_divergence(const OrientedHypergraph& h, std::span<const double> g);

/// c div_H(|c grad_H f|^{p-2} c grad_H f). With c = 1 this is the unscaled
/// operator; c = 1/(n eps^2) rescales both gradient and divergence.
std::vector<double> hyper_p_laplacian(const OrientedHypergraph& h, std::span<const double> f, double p,
                                      double scale = 1.0);

}  // namespace pbg
