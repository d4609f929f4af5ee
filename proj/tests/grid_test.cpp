#include <doctest.h>

#include <cmath>
#include <random>

#include "condual/grid.hpp"

using namespace condual;

TEST_CASE("grid coordinates and indexing") {
  GridSpec g({{-4.0, 4.0, 9}, {0.0, 1.0, 3}});
  CHECK(g.dims() == 2);
  CHECK(g.num_nodes() == 27);
  CHECK(g.spacing(0) == 1.0);
  CHECK(g.spacing(1) == 0.5);
  CHECK(g.max_spacing() == 1.0);
  // Endpoints are hit exactly.
  CHECK(g.coord(0, 0) == -4.0);
  CHECK(g.coord(0, 8) == 4.0);
  CHECK(g.coord(1, 2) == 1.0);

  // flat_index / unflatten round trip, in lexicographic order.
  size_t flat = 0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 3; ++j) {
      int multi[2] = {i, j};
      CHECK(g.flat_index(std::span<const int>(multi, 2)) == flat);
      int back[2];
      g.unflatten(flat, std::span<int>(back, 2));
      CHECK(back[0] == i);
      CHECK(back[1] == j);
      Point node = g.node(flat);
      CHECK(node[0] == g.coord(0, i));
      CHECK(node[1] == g.coord(1, j));
      ++flat;
    }

  CHECK_THROWS_AS(GridSpec({{0.0, 1.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec({{1.0, 0.0, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec({}), std::invalid_argument);
}

TEST_CASE("nearest node breaks ties toward the lower node") {
  GridSpec g({{0.0, 4.0, 5}});  // nodes 0,1,2,3,4
  double x0[1] = {1.49};
  CHECK(g.nearest_node(std::span<const double>(x0, 1)) == 1);
  double x1[1] = {1.5};  // exact midpoint: lower node wins
  CHECK(g.nearest_node(std::span<const double>(x1, 1)) == 1);
  double x2[1] = {1.51};
  CHECK(g.nearest_node(std::span<const double>(x2, 1)) == 2);
  double x3[1] = {-7.0};  // clamped
  CHECK(g.nearest_node(std::span<const double>(x3, 1)) == 0);
  double x4[1] = {9.0};
  CHECK(g.nearest_node(std::span<const double>(x4, 1)) == 4);

  double in[1] = {3.2}, out[1] = {4.2};
  CHECK(g.contains(std::span<const double>(in, 1)));
  CHECK(!g.contains(std::span<const double>(out, 1)));
}

TEST_CASE("double formatting round trip and sentinels") {
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(-kInf) == "-inf");
  CHECK(parse_double("inf") == kInf);
  CHECK(parse_double("+inf") == kInf);
  CHECK(parse_double("-inf") == -kInf);
  CHECK_THROWS_AS(parse_double("zebra"), schema_error);
  CHECK_THROWS_AS(parse_double(""), schema_error);
  CHECK_THROWS_AS(parse_double("1.5x"), schema_error);
  CHECK_THROWS_AS(parse_double("nan"), schema_error);

  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> uni(-1e6, 1e6);
  for (int t = 0; t < 2000; ++t) {
    double v = uni(rng);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(parse_double(format_double(0.1)) == 0.1);
  CHECK(parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv round trip with infinities") {
  GridSpec g({{-1.0, 1.0, 3}});
  GridFunction f = make_grid_function(g, 2);
  f.at(0, 0) = kInf;
  f.at(0, 1) = -0.25;
  f.at(1, 0) = 0.0;
  f.at(1, 1) = 1.0 / 3.0;
  f.at(2, 0) = kInf;
  f.at(2, 1) = 17.0;

  std::string csv = to_csv(f);
  CHECK(csv.substr(0, csv.find("\r\n")) == "x0,atom0,atom1");
  // Every line ends CRLF, including the last.
  CHECK(csv.size() >= 2);
  CHECK(csv.substr(csv.size() - 2) == "\r\n");
  size_t lines = 0;
  for (size_t p = csv.find("\r\n"); p != std::string::npos; p = csv.find("\r\n", p + 2)) ++lines;
  CHECK(lines == 4);  // header + 3 nodes

  GridFunction back = from_csv(csv, g, 2);
  CHECK(back.values == f.values);

  CHECK_THROWS_AS(from_csv("garbage", g, 2), schema_error);
  CHECK_THROWS_AS(from_csv(csv, g, 3), schema_error);
  CHECK_THROWS_AS(from_csv(csv, GridSpec({{-1.0, 1.0, 4}}), 2), schema_error);
}

TEST_CASE("grid convexity recognizes convex and rejects non-convex data") {
  GridSpec g({{-4.0, 4.0, 9}});
  GridFunction quad = make_grid_function(g, 1);
  for (size_t i = 0; i < g.num_nodes(); ++i) {
    double x = g.coord(0, static_cast<int>(i));
    quad.at(i, 0) = 0.5 * x * x;
  }
  CHECK(is_grid_convex(quad, 1e-12));

  GridFunction well = quad;
  for (size_t i = 0; i < g.num_nodes(); ++i) {
    double x = g.coord(0, static_cast<int>(i));
    well.at(i, 0) = (x * x - 1) * (x * x - 1);
  }
  CHECK(!is_grid_convex(well, 1e-9));

  // A finite / inf / finite gap breaks the contiguous-run requirement.
  GridFunction gap = quad;
  gap.at(4, 0) = kInf;
  CHECK(!is_grid_convex(gap, 1e-9));

  // Indicator-style inf tails are fine.
  GridFunction box = make_grid_function(g, 1);
  for (size_t i = 0; i < g.num_nodes(); ++i) {
    double x = g.coord(0, static_cast<int>(i));
    box.at(i, 0) = std::fabs(x) <= 1.0 ? 0.0 : kInf;
  }
  CHECK(is_grid_convex(box, 1e-12));
}

TEST_CASE("properness of grid data") {
  GridSpec g({{0.0, 1.0, 3}});
  GridFunction ok = make_grid_function(g, 2);
  require_proper(ok, "test");  // all zeros: fine

  GridFunction neg = ok;
  neg.at(1, 0) = -kInf;
  CHECK_THROWS_AS(require_proper(neg, "test"), properness_error);

  GridFunction empty = ok;
  for (size_t i = 0; i < g.num_nodes(); ++i) empty.at(i, 1) = kInf;
  CHECK_THROWS_AS(require_proper(empty, "test"), properness_error);
}
