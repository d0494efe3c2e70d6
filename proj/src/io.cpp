#include "pbigraph/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pbigraph/error.hpp"

namespace pbg::io {

namespace {

constexpr int kDigits = 17;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() && s.find_first_not_of(" \r\t", used) != std::string::npos) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::io, "cannot parse number '" + s + "'");
  }
}

std::uint64_t byteswap64(std::uint64_t v) {
  std::uint64_t r = 0;
  for (int k = 0; k < 8; ++k) r = (r << 8) | ((v >> (8 * k)) & 0xffu);
  return r;
}

}  // namespace

void write_cloud_csv(std::ostream& os, const PointCloud& cloud) {
  const int d = cloud.dim();
  for (int k = 0; k < d; ++k) os << (k ? "," : "") << 'x' << k;
  os << '\n' << std::setprecision(kDigits);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto x = cloud.point(i);
    for (int k = 0; k < d; ++k) os << (k ? "," : "") << x[k];
    os << '\n';
  }
}

PointCloud read_cloud_csv(std::istream& is, const BoxDomain& domain) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::io, "cloud csv: missing header");
  const auto header = split(line, ',');
  require(header.size() == static_cast<std::size_t>(domain.dim()), ErrorCode::io,
          "cloud csv: header does not match the domain dimension");
  for (std::size_t k = 0; k < header.size(); ++k)
    require(header[k] == "x" + std::to_string(k), ErrorCode::io, "cloud csv: expected header x0,...,x{d-1}");
  std::vector<double> pos;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cols = split(line, ',');
    require(cols.size() == header.size(), ErrorCode::io, "cloud csv: ragged row");
    for (const auto& c : cols) pos.push_back(parse_double(c));
  }
  return PointCloud::from_positions(domain, std::move(pos));
}

void write_values_binary(const std::string& path, std::span<const double> values) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorCode::io, "cannot open '" + path + "' for writing");
  for (double v : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if constexpr (std::endian::native == std::endian::big) bits = byteswap64(bits);
    os.write(reinterpret_cast<const char*>(&bits), 8);
  }
}

std::vector<double> read_values_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorCode::io, "cannot open '" + path + "'");
  std::vector<double> out;
  std::uint64_t bits;
  while (is.read(reinterpret_cast<char*>(&bits), 8)) {
    if constexpr (std::endian::native == std::endian::big) bits = byteswap64(bits);
    double v;
    std::memcpy(&v, &bits, 8);
    out.push_back(v);
  }
  require(is.gcount() == 0, ErrorCode::io, "binary dump '" + path + "' has a truncated record");
  return out;
}

void write_graph_function_csv(std::ostream& os, std::span<const double> u) {
  os << "vertex_id,value\n" << std::setprecision(kDigits);
  for (std::size_t i = 0; i < u.size(); ++i) os << i << ',' << u[i] << '\n';
}

std::vector<double> read_graph_function_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::io, "graph function csv: missing header");
  std::vector<double> out;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cols = split(line, ',');
    require(cols.size() == 2, ErrorCode::io, "graph function csv: expected vertex_id,value");
    const auto id = static_cast<std::size_t>(parse_double(cols[0]));
    require(id == out.size(), ErrorCode::io, "graph function csv: vertex ids must be 0..n-1 in order");
    out.push_back(parse_double(cols[1]));
  }
  return out;
}

void write_matrix_market(std::ostream& os, const WeightedGraph& g) {
  std::size_t lower = 0;
  for (std::size_t i = 0; i < g.n(); ++i)
    for (auto j : g.row(i)) lower += j < i;
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << g.n() << ' ' << g.n() << ' ' << lower << '\n' << std::setprecision(kDigits);
  for (std::size_t i = 0; i < g.n(); ++i) {
    const auto r = g.row(i);
    for (std::size_t k = 0; k < r.size(); ++k)
      if (r[k] < i) os << i + 1 << ' ' << r[k] + 1 << ' ' << g.weight_at(g.row_ptr()[i] + k) << '\n';
  }
}

void write_grid_csv(std::ostream& os, const GridFunction& g) {
  const int d = g.grid.dim();
  static const char* names[] = {"i", "j", "k"};
  for (int k = 0; k < d; ++k) {
    if (k < 3) {
      os << names[k] << ',';
    } else {
      os << 'i' << k << ',';
    }
  }
  os << "value\n" << std::setprecision(kDigits);
  std::vector<int> idx(d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.grid.unravel(i, idx);
    for (int k = 0; k < d; ++k) os << idx[k] << ',';
    os << g.values[i] << '\n';
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::io, "cannot open '" + path + "' for writing");
  os << text;
}

}  // namespace pbg::io
