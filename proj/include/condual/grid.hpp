#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "condual/cond_real.hpp"

namespace condual {

// A rectangular grid in R^n, n <= 3, with uniform nodes per axis.
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 2;  // >= 2 nodes
};

class GridSpec {
 public:
  explicit GridSpec(std::vector<GridAxis> axes);

  int dims() const { return static_cast<int>(axes_.size()); }
  const GridAxis& axis(int j) const { return axes_[j]; }
  size_t num_nodes() const { return total_; }
  double spacing(int j) const;
  double max_spacing() const;
  double coord(int j, int i) const;  // i-th node along axis j
  // Row-major flattening: the last axis varies fastest, so ascending flat
  // index is ascending lexicographic order of node coordinates.
  size_t flat_index(std::span<const int> multi) const;
  void unflatten(size_t flat, std::span<int> multi) const;
  Point node(size_t flat) const;
  // Flat index of the node nearest to x (ties toward the lower node).
  size_t nearest_node(std::span<const double> x) const;
  bool contains(std::span<const double> x) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::vector<GridAxis> axes_;
  size_t total_ = 1;
};

// Extended-real values of d atom components on every node of a grid.
// -inf never appears in a valid input; conjugation rejects it.
struct GridFunction {
  GridSpec grid;
  int d = 1;
  std::vector<double> values;  // node-major: values[node * d + k]
  bool claimed_convex = false;
  bool claimed_proper = false;

  double at(size_t node, int k) const { return values[node * d + k]; }
  double& at(size_t node, int k) { return values[node * d + k]; }
  CondExtReal at_node(size_t node) const;
};

GridFunction make_grid_function(GridSpec grid, int d);

// Per atom: no -inf anywhere and at least one finite node. Throws
// properness_error otherwise.
void require_proper(const GridFunction& f, const char* who);

// Along every axis-aligned grid line and every atom: the finite nodes form a
// contiguous run and second differences stay above -tol.
bool is_grid_convex(const GridFunction& f, double tol);

// RFC 4180 CSV with CRLF line ends: one row per node, coordinate columns
// x0..x{n-1} then one column per atom. Non-finite values use the sentinels
// "inf" and "-inf"; decimals always use '.'.
std::string to_csv(const GridFunction& f);
GridFunction from_csv(const std::string& text, const GridSpec& grid, int d);

// Locale-independent shortest round-trip formatting; "inf"/"-inf" sentinels.
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace condual
