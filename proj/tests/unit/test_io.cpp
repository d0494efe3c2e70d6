#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "pbigraph/error.hpp"
#include "pbigraph/io.hpp"

using namespace pbg;

namespace fs = std::filesystem;

TEST(Io, CloudCsvRoundTrip) {
  const auto c = test::uniform_cloud(50, 3);
  std::stringstream ss;
  io::write_cloud_csv(ss, c);
  EXPECT_EQ(ss.str().substr(0, 6), "x0,x1\n");
  const auto back = io::read_cloud_csv(ss, c.domain);
  EXPECT_EQ(back.positions, c.positions);
}

TEST(Io, CloudCsvRejectsBadHeader) {
  std::stringstream ss("a,b\n0.1,0.2\n");
  EXPECT_CODE(io::read_cloud_csv(ss, BoxDomain::unit(2)), ErrorCode::io);
}

TEST(Io, BinaryRoundTrip) {
  const auto path = (fs::temp_directory_path() / "pbg_io_test.bin").string();
  const auto v = test::random_vector(257, 4);
  io::write_values_binary(path, v);
  EXPECT_EQ(fs::file_size(path), 257u * 8u);
  EXPECT_EQ(io::read_values_binary(path), v);
  fs::remove(path);
  EXPECT_CODE(io::read_values_binary(path), ErrorCode::io);
}

TEST(Io, GraphFunctionRoundTrip) {
  const auto v = test::random_vector(31, 5);
  std::stringstream ss;
  io::write_graph_function_csv(ss, v);
  EXPECT_EQ(ss.str().substr(0, 15), "vertex_id,value");
  EXPECT_EQ(io::read_graph_function_csv(ss), v);
}

TEST(Io, MatrixMarketLowerTriangle) {
  const auto g = assemble_graph(test::three_points(), Kernel::indicator(1.0), 1.0);
  std::stringstream ss;
  io::write_matrix_market(ss, g);
  const auto s = ss.str();
  EXPECT_EQ(s.rfind("%%MatrixMarket matrix coordinate real symmetric", 0), 0u);
  EXPECT_NE(s.find("3 3 1\n"), std::string::npos);
  EXPECT_NE(s.find("2 1 1"), std::string::npos);
}

TEST(Io, GridCsv) {
  const GridSpec grid(BoxDomain::unit(2), {3, 4});
  GridFunction g(grid);
  g.values[5] = 2.5;
  std::stringstream ss;
  io::write_grid_csv(ss, g);
  std::string header, line;
  std::getline(ss, header);
  EXPECT_EQ(header, "i,j,value");
  int rows = 0;
  bool found = false;
  while (std::getline(ss, line)) ++rows, found |= line == "1,1,2.5";
  EXPECT_EQ(rows, 12);
  EXPECT_TRUE(found);
}
