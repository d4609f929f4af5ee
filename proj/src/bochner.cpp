#include "condual/bochner.hpp"

#include <algorithm>
#include <cmath>

namespace condual {

namespace {

void require_same_space(const L0Element& x, const L0Element& y, const char* op) {
  if (!(x.space() == y.space()))
    throw algebra_mismatch_error(std::string(op) + ": elements live on different measure spaces");
}

std::vector<Point> check_raw(const FiniteMeasureSpace& space, std::vector<Point> raw,
                             const char* what) {
  require(raw.size() == static_cast<size_t>(space.num_points()),
          "L0Element: one value per outcome");
  require(!raw.empty(), "L0Element: empty raw");
  const size_t n = raw[0].size();
  require(n >= 1, "L0Element: values must have positive dimension");
  for (const Point& p : raw) {
    require(p.size() == n, "L0Element: all values must share one dimension");
    reject_nan(p, what);
    for (double v : p) require(std::isfinite(v), "L0Element: values must be finite");
  }
  return raw;
}

}  // namespace

FiniteMeasureSpace make_measure_space(std::vector<std::string> labels,
                                      std::vector<double> weights) {
  require(!labels.empty(), "measure space: at least one outcome");
  require(labels.size() == weights.size(), "measure space: one weight per outcome");
  require(labels.size() <= Condition::kMaxAtoms, "measure space: too many outcomes");
  bool positive = false;
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0, "measure space: weights must be finite and nonnegative");
    positive = positive || w > 0.0;
  }
  require(positive, "measure space: all outcomes are null");
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j)
      require(labels[i] != labels[j], "measure space: duplicate outcome label");
  return FiniteMeasureSpace{std::move(labels), std::move(weights)};
}

MeasureAlgebraMap::MeasureAlgebraMap(FiniteMeasureSpace space)
    : space_(make_measure_space(std::move(space.labels), std::move(space.weights))) {
  point_to_atom_.assign(space_.num_points(), -1);
  for (int p = 0; p < space_.num_points(); ++p)
    if (space_.weights[p] > 0.0) {
      point_to_atom_[p] = static_cast<int>(atom_to_point_.size());
      atom_to_point_.push_back(p);
    }
}

bool MeasureAlgebraMap::is_null(int point) const {
  require(point >= 0 && point < num_points(), "MeasureAlgebraMap: point out of range");
  return point_to_atom_[point] < 0;
}

int MeasureAlgebraMap::atom_of(int point) const {
  require(point >= 0 && point < num_points(), "MeasureAlgebraMap: point out of range");
  return point_to_atom_[point];
}

int MeasureAlgebraMap::point_of(int atom) const {
  require(atom >= 0 && atom < algebra_size(), "MeasureAlgebraMap: atom out of range");
  return atom_to_point_[atom];
}

Condition MeasureAlgebraMap::image(std::span<const int> point_indices) const {
  std::uint64_t mask = 0;
  for (int p : point_indices) {
    require(p >= 0 && p < num_points(), "MeasureAlgebraMap: point out of range");
    if (point_to_atom_[p] >= 0) mask |= std::uint64_t{1} << point_to_atom_[p];
  }
  return Condition::from_mask(algebra_size(), mask);
}

std::pair<int, MeasureAlgebraMap> measure_algebra(const FiniteMeasureSpace& space) {
  MeasureAlgebraMap map(space);
  return {map.algebra_size(), std::move(map)};
}

L0Element::L0Element(FiniteMeasureSpace space, std::vector<Point> raw)
    : space_(std::move(space)),
      raw_(check_raw(space_, std::move(raw), "L0Element")),
      canonical_(CondVector::constant(1, Point{0.0})) {
  MeasureAlgebraMap map(space_);
  const int n = static_cast<int>(raw_[0].size());
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(n) * map.algebra_size());
  for (int k = 0; k < map.algebra_size(); ++k) {
    const Point& p = raw_[map.point_of(k)];
    flat.insert(flat.end(), p.begin(), p.end());
  }
  canonical_ = CondVector(n, map.algebra_size(), std::move(flat));
}

L0Element canonicalize(FiniteMeasureSpace space, std::vector<Point> raw) {
  return L0Element(std::move(space), std::move(raw));
}

CondVector iso_to_cond(const L0Element& x) { return x.canonical(); }

L0Element cond_to_l0(const FiniteMeasureSpace& space, const CondVector& v) {
  MeasureAlgebraMap map(space);
  require_same_algebra(map.algebra_size(), v.algebra_size(), "cond_to_l0");
  std::vector<Point> raw(space.num_points(), Point(v.dim(), 0.0));
  for (int k = 0; k < map.algebra_size(); ++k) raw[map.point_of(k)] = v.atom_point(k);
  return L0Element(space, std::move(raw));
}

L0Element l0_add(const L0Element& x, const L0Element& y) {
  require_same_space(x, y, "l0_add");
  require(x.dim() == y.dim(), "l0_add: dimension mismatch");
  std::vector<Point> raw = x.raw();
  for (int p = 0; p < x.num_points(); ++p)
    for (int i = 0; i < x.dim(); ++i) raw[p][i] += y.raw()[p][i];
  return L0Element(x.space(), std::move(raw));
}

L0Element l0_scale(double a, const L0Element& x) {
  require(std::isfinite(a), "l0_scale: scale must be finite");
  std::vector<Point> raw = x.raw();
  for (Point& p : raw)
    for (double& v : p) v *= a;
  return L0Element(x.space(), std::move(raw));
}

L0Element l0_norm(const L0Element& x) {
  std::vector<Point> raw(x.num_points());
  for (int p = 0; p < x.num_points(); ++p) raw[p] = Point{norm2(x.raw()[p])};
  return L0Element(x.space(), std::move(raw));
}

L0Element l0_pairing(const L0Element& x, const L0Element& y) {
  require_same_space(x, y, "l0_pairing");
  require(x.dim() == y.dim(), "l0_pairing: dimension mismatch");
  std::vector<Point> raw(x.num_points());
  for (int p = 0; p < x.num_points(); ++p) raw[p] = Point{dot(x.raw()[p], y.raw()[p])};
  return L0Element(x.space(), std::move(raw));
}

L0Element l0_concatenate(const Partition& p, std::span<const L0Element> family) {
  require(!family.empty(), "l0_concatenate: empty family");
  require(p.size() == family.size(), "l0_concatenate: one element per block");
  for (size_t j = 1; j < family.size(); ++j) {
    require_same_space(family[0], family[j], "l0_concatenate");
    require(family[0].dim() == family[j].dim(), "l0_concatenate: dimension mismatch");
  }
  MeasureAlgebraMap map(family[0].space());
  require_same_algebra(map.algebra_size(), p.algebra_size(), "l0_concatenate");
  std::vector<Point> raw = family[0].raw();
  for (size_t j = 0; j < p.size(); ++j)
    for (int atom : p.block(j).atoms()) raw[map.point_of(atom)] = family[j].raw()[map.point_of(atom)];
  return L0Element(family[0].space(), std::move(raw));
}

L0Element ess_sup_l0(std::span<const L0Element> family) {
  require(!family.empty(), "ess_sup_l0: empty family");
  for (const L0Element& x : family) {
    require_same_space(family[0], x, "ess_sup_l0");
    require(x.dim() == 1, "ess_sup_l0: scalar elements only");
  }
  std::vector<Point> raw = family[0].raw();
  for (const L0Element& x : family.subspan(1))
    for (int p = 0; p < x.num_points(); ++p) raw[p][0] = std::max(raw[p][0], x.raw()[p][0]);
  return L0Element(family[0].space(), std::move(raw));
}

}  // namespace condual
