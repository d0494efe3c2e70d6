#include "pbigraph/hypergraph.hpp"

#include <algorithm>
#include <ostream>

#include "pbigraph/error.hpp"
#include "pbigraph/graph_ops.hpp"
#include "pbigraph/parallel.hpp"

namespace pbg {

OrientedHypergraph OrientedHypergraph::from_arcs(std::size_t n, const std::vector<Hyperarc>& arcs) {
  OrientedHypergraph h;
  h.n_ = n;
  std::vector<char> seen(n, 0);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const auto& arc = arcs[a];
    require_arg(!arc.out.empty() && !arc.in.empty(), "hyperarc " + std::to_string(a) + " has an empty vertex set");
    for (auto v : arc.out) require_arg(v < n, "hyperarc vertex out of range");
    for (auto v : arc.in) require_arg(v < n, "hyperarc vertex out of range");
    auto out = arc.out;
    auto in = arc.in;
    std::sort(out.begin(), out.end());
    std::sort(in.begin(), in.end());
    require_arg(std::adjacent_find(out.begin(), out.end()) == out.end() &&
                    std::adjacent_find(in.begin(), in.end()) == in.end(),
                "hyperarc " + std::to_string(a) + " repeats a vertex");
    for (auto v : out) seen[v] = 1;
    for (auto v : in)
      require_arg(!seen[v], "hyperarc " + std::to_string(a) + ": out and in sets are not disjoint");
    for (auto v : out) seen[v] = 0;
    h.out_ids_.insert(h.out_ids_.end(), out.begin(), out.end());
    h.in_ids_.insert(h.in_ids_.end(), in.begin(), in.end());
    h.out_ptr_.push_back(h.out_ids_.size());
    h.in_ptr_.push_back(h.in_ids_.size());
    h.ratio_.push_back(static_cast<double>(in.size()) / static_cast<double>(out.size()));
  }
  h.build_reverse();
  return h;
}

void OrientedHypergraph::build_reverse() {
  auto invert = [this](const std::vector<std::uint64_t>& ptr, const std::vector<std::uint32_t>& ids,
                       std::vector<std::uint64_t>& rptr, std::vector<std::uint32_t>& rids) {
    rptr.assign(n_ + 1, 0);
    for (auto v : ids) ++rptr[v + 1];
    for (std::size_t v = 0; v < n_; ++v) rptr[v + 1] += rptr[v];
    rids.resize(ids.size());
    std::vector<std::uint64_t> fill(rptr.begin(), rptr.end() - 1);
    // Arcs are visited in ascending order, so each reverse list ends up sorted.
    for (std::size_t a = 0; a + 1 < ptr.size(); ++a)
      for (auto k = ptr[a]; k < ptr[a + 1]; ++k) rids[fill[ids[k]]++] = static_cast<std::uint32_t>(a);
  };
  invert(in_ptr_, in_ids_, rin_ptr_, rin_ids_);
  invert(out_ptr_, out_ids_, rout_ptr_, rout_ids_);
}

void OrientedHypergraph::dump(std::ostream& os) const {
  for (std::size_t a = 0; a < arc_count(); ++a) {
    bool first = true;
    for (auto v : out(a)) {
      os << (first ? "" : " ") << v;
      first = false;
    }
    os << " |";
    for (auto v : in(a)) os << ' ' << v;
    os << '\n';
  }
}

OrientedHypergraph build_hypergraph(const PointCloud& cloud, double eps) {
  require_arg(eps > 0.0, "build_hypergraph: eps must be > 0");
  // The unit-weight graph already holds exactly the eps-ball neighbor lists.
  const auto g = assemble_unit_graph(cloud, eps);
  OrientedHypergraph h;
  h.n_ = g.n();
  h.in_ids_.reserve(g.nnz());
  for (std::size_t i = 0; i < g.n(); ++i) {
    const auto nb = g.row(i);
    if (nb.empty()) {
      h.dropped_.push_back(static_cast<std::uint32_t>(i));
      continue;
    }
    h.out_ids_.push_back(static_cast<std::uint32_t>(i));
    h.in_ids_.insert(h.in_ids_.end(), nb.begin(), nb.end());
    h.out_ptr_.push_back(h.out_ids_.size());
    h.in_ptr_.push_back(h.in_ids_.size());
    h.ratio_.push_back(static_cast<double>(nb.size()));
  }
  h.build_reverse();
  return h;
}

std::vector<double> hyper_gradient(const OrientedHypergraph& h, std::span<const double> f) {
  require_length(f.size(), h.n(), "hyper_gradient input");
  std::vector<double> g(h.arc_count());
  parallel_for(h.arc_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t a = b; a < e; ++a) {
      double sin = 0.0, sout = 0.0;
      for (auto v : h.in(a)) sin += f[v];
      for (auto v : h.out(a)) sout += f[v];
      g[a] = sin - h.ratio(a) * sout;
    }
  });
  return g;
}

std::vector<double> hyper_adjoint(const OrientedHypergraph& h, std::span<const double> g) {
  require_length(g.size(), h.arc_count(), "hyper_adjoint input");
  std::vector<double> f(h.n());
  parallel_for(h.n(), [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) {
      double sin = 0.0, sout = 0.0;
      for (auto a : h.arcs_with_input(v)) sin += g[a];
      for (auto a : h.arcs_with_output(v)) sout += h.ratio(a) * g[a];
      f[v] = sin - sout;
    }
  });
  return f;
}

std::vector<double> hyper_divergence(const OrientedHypergraph& h, std::span<const double> g) {
  auto f = hyper_adjoint(h, g);
  for (double& x : f) x = -x;
  return f;
}

std::vector<double> hyper_p_laplacian(const OrientedHypergraph& h, std::span<const double> f, double p,
                                      double scale) {
  require_arg(p > 1.0, "hyper_p_laplacian: p must be > 1");
  require_arg(scale > 0.0, "hyper_p_laplacian: scale must be > 0");
  auto g = hyper_gradient(h, f);
  for (double& x : g) x = signed_power(scale * x, p);
  auto out = hyper_divergence(h, g);
  if (scale != 1.0)
    for (double& x : out) x *= scale;
  return out;
}

}  // namespace pbg
