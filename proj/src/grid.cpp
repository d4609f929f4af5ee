#include "condual/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace condual {

GridSpec::GridSpec(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  require(!axes_.empty() && axes_.size() <= 3, "GridSpec: 1 to 3 axes supported");
  for (const GridAxis& a : axes_) {
    require(std::isfinite(a.lo) && std::isfinite(a.hi) && a.lo < a.hi,
            "GridSpec: axis needs finite lo < hi");
    require(a.count >= 2, "GridSpec: axis needs at least 2 nodes");
    total_ *= static_cast<size_t>(a.count);
  }
}

double GridSpec::spacing(int j) const {
  const GridAxis& a = axes_[j];
  return (a.hi - a.lo) / (a.count - 1);
}

double GridSpec::max_spacing() const {
  double h = 0.0;
  for (int j = 0; j < dims(); ++j) h = std::max(h, spacing(j));
  return h;
}

double GridSpec::coord(int j, int i) const {
  const GridAxis& a = axes_[j];
  if (i == a.count - 1) return a.hi;  // hit the endpoint exactly
  return a.lo + i * spacing(j);
}

size_t GridSpec::flat_index(std::span<const int> multi) const {
  size_t f = 0;
  for (int j = 0; j < dims(); ++j) {
    require(multi[j] >= 0 && multi[j] < axes_[j].count, "GridSpec: index out of range");
    f = f * axes_[j].count + multi[j];
  }
  return f;
}

void GridSpec::unflatten(size_t flat, std::span<int> multi) const {
  for (int j = dims() - 1; j >= 0; --j) {
    multi[j] = static_cast<int>(flat % axes_[j].count);
    flat /= axes_[j].count;
  }
}

Point GridSpec::node(size_t flat) const {
  int multi[3];
  unflatten(flat, std::span<int>(multi, dims()));
  Point p(dims());
  for (int j = 0; j < dims(); ++j) p[j] = coord(j, multi[j]);
  return p;
}

size_t GridSpec::nearest_node(std::span<const double> x) const {
  require(x.size() == static_cast<size_t>(dims()), "nearest_node: dimension mismatch");
  size_t f = 0;
  for (int j = 0; j < dims(); ++j) {
    double t = (x[j] - axes_[j].lo) / spacing(j);
    int i = static_cast<int>(std::floor(t + 0.5));
    // Ties toward the lower node.
    if (i > 0 && t + 0.5 == std::floor(t + 0.5)) i -= 1;
    i = std::clamp(i, 0, axes_[j].count - 1);
    f = f * axes_[j].count + i;
  }
  return f;
}

bool GridSpec::contains(std::span<const double> x) const {
  if (x.size() != static_cast<size_t>(dims())) return false;
  for (int j = 0; j < dims(); ++j)
    if (x[j] < axes_[j].lo || x[j] > axes_[j].hi) return false;
  return true;
}

CondExtReal GridFunction::at_node(size_t node) const {
  std::vector<double> v(values.begin() + node * d, values.begin() + (node + 1) * d);
  return CondExtReal(d, std::move(v));
}

GridFunction make_grid_function(GridSpec grid, int d) {
  require(d >= 1 && d <= Condition::kMaxAtoms, "make_grid_function: atom count out of range");
  size_t total = grid.num_nodes();
  return GridFunction{std::move(grid), d, std::vector<double>(total * d, 0.0), false, false};
}

void require_proper(const GridFunction& f, const char* who) {
  std::vector<bool> has_finite(f.d, false);
  for (size_t node = 0; node < f.grid.num_nodes(); ++node)
    for (int k = 0; k < f.d; ++k) {
      double v = f.at(node, k);
      if (std::isnan(v)) throw properness_error(std::string(who) + ": NaN value on the grid");
      if (v == -kInf)
        throw properness_error(std::string(who) + ": -inf value; the function is not proper");
      if (std::isfinite(v)) has_finite[k] = true;
    }
  for (int k = 0; k < f.d; ++k)
    if (!has_finite[k])
      throw properness_error(std::string(who) +
                             ": an atom component is +inf everywhere; the function is not proper");
}

bool is_grid_convex(const GridFunction& f, double tol) {
  const GridSpec& g = f.grid;
  const int n = g.dims();
  for (int axis = 0; axis < n; ++axis) {
    // Walk every grid line along `axis`.
    size_t line_count = 1;
    for (int j = 0; j < n; ++j)
      if (j != axis) line_count *= static_cast<size_t>(g.axis(j).count);
    int m = g.axis(axis).count;
    for (size_t line = 0; line < line_count; ++line) {
      int multi[3] = {0, 0, 0};
      size_t rest = line;
      for (int j = n - 1; j >= 0; --j) {
        if (j == axis) continue;
        multi[j] = static_cast<int>(rest % g.axis(j).count);
        rest /= g.axis(j).count;
      }
      for (int k = 0; k < f.d; ++k) {
        int first_finite = -1, last_finite = -1;
        for (int i = 0; i < m; ++i) {
          multi[axis] = i;
          double v = f.at(g.flat_index(std::span<const int>(multi, n)), k);
          if (std::isfinite(v)) {
            if (first_finite < 0) first_finite = i;
            last_finite = i;
          }
        }
        if (first_finite < 0) continue;
        for (int i = first_finite; i <= last_finite; ++i) {
          multi[axis] = i;
          if (!std::isfinite(f.at(g.flat_index(std::span<const int>(multi, n)), k)))
            return false;  // a +inf gap inside the finite run
        }
        for (int i = first_finite + 1; i + 1 <= last_finite; ++i) {
          multi[axis] = i - 1;
          double a = f.at(g.flat_index(std::span<const int>(multi, n)), k);
          multi[axis] = i;
          double b = f.at(g.flat_index(std::span<const int>(multi, n)), k);
          multi[axis] = i + 1;
          double c = f.at(g.flat_index(std::span<const int>(multi, n)), k);
          if (a - 2 * b + c < -tol) return false;
        }
      }
    }
  }
  return true;
}

std::string format_double(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  require(!std::isnan(v), "format_double: NaN is not a value");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw schema_error("parse_double: not a number: '" + s + "'");
  if (std::isnan(v)) throw schema_error("parse_double: NaN is not a value");
  return v;
}

std::string to_csv(const GridFunction& f) {
  std::string out;
  for (int j = 0; j < f.grid.dims(); ++j) {
    if (j) out += ',';
    out += "x" + std::to_string(j);
  }
  for (int k = 0; k < f.d; ++k) out += ",atom" + std::to_string(k);
  out += "\r\n";
  for (size_t node = 0; node < f.grid.num_nodes(); ++node) {
    Point p = f.grid.node(node);
    for (int j = 0; j < f.grid.dims(); ++j) {
      if (j) out += ',';
      out += format_double(p[j]);
    }
    for (int k = 0; k < f.d; ++k) {
      out += ',';
      out += format_double(f.at(node, k));
    }
    out += "\r\n";
  }
  return out;
}

GridFunction from_csv(const std::string& text, const GridSpec& grid, int d) {
  GridFunction f = make_grid_function(grid, d);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  size_t node = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (node >= grid.num_nodes()) throw schema_error("from_csv: more rows than grid nodes");
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < grid.dims(); ++j) std::getline(row, cell, ',');
    for (int k = 0; k < d; ++k) {
      if (!std::getline(row, cell, ',')) throw schema_error("from_csv: short row");
      f.at(node, k) = parse_double(cell);
    }
    ++node;
  }
  if (node != grid.num_nodes()) throw schema_error("from_csv: fewer rows than grid nodes");
  return f;
}

}  // namespace condual
