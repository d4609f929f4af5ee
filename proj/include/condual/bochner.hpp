// Finite measure spaces, their measure algebras (null sets quotiented away),
// and the isometric identification of finite-dimensional Bochner elements
// with conditional vectors.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "condual/boolean_algebra.hpp"
#include "condual/cond_real.hpp"
#include "condual/conditional_metric.hpp"
#include "condual/core.hpp"

namespace condual {

// (Omega, mu) with named outcomes. Weights are nonnegative and finite; at
// least one must be positive so the measure algebra is nontrivial.
struct FiniteMeasureSpace {
  std::vector<std::string> labels;
  std::vector<double> weights;

  int num_points() const { return static_cast<int>(labels.size()); }
  bool operator==(const FiniteMeasureSpace&) const = default;
};

FiniteMeasureSpace make_measure_space(std::vector<std::string> labels,
                                      std::vector<double> weights);

// The quotient map from subsets of outcomes to Conditions of the algebra
// whose atoms are the positive-weight outcomes. Two subsets map to the same
// Condition exactly when their symmetric difference is null.
class MeasureAlgebraMap {
 public:
  explicit MeasureAlgebraMap(FiniteMeasureSpace space);

  const FiniteMeasureSpace& space() const { return space_; }
  int num_points() const { return space_.num_points(); }
  int algebra_size() const { return static_cast<int>(atom_to_point_.size()); }

  bool is_null(int point) const;
  // Atom index of a positive-weight point; -1 for null points.
  int atom_of(int point) const;
  int point_of(int atom) const;

  // Quotient map on a subset given by point indices (duplicates allowed).
  Condition image(std::span<const int> point_indices) const;

 private:
  FiniteMeasureSpace space_;
  std::vector<int> point_to_atom_;  // -1 on null points
  std::vector<int> atom_to_point_;
};

std::pair<int, MeasureAlgebraMap> measure_algebra(const FiniteMeasureSpace& space);

// An (everywhere-defined representative of an) equivalence class of
// vector-valued functions on the space, identified up to null sets. The raw
// values are kept for inspection; identity, equality, and all derived
// quantities go through the canonical form, which lives on the positive
// atoms only.
class L0Element {
 public:
  L0Element(FiniteMeasureSpace space, std::vector<Point> raw);

  const FiniteMeasureSpace& space() const { return space_; }
  int num_points() const { return space_.num_points(); }
  int dim() const { return canonical_.dim(); }
  const std::vector<Point>& raw() const { return raw_; }
  const CondVector& canonical() const { return canonical_; }

  // Almost-everywhere equality: same space, same canonical form.
  bool operator==(const L0Element& o) const {
    return space_ == o.space_ && canonical_ == o.canonical_;
  }

 private:
  FiniteMeasureSpace space_;
  std::vector<Point> raw_;
  CondVector canonical_;
};

L0Element canonicalize(FiniteMeasureSpace space, std::vector<Point> raw);

// The isometric identification: canonical form, atom k <-> k-th
// positive-weight point. Norm-preserving and linear by construction.
CondVector iso_to_cond(const L0Element& x);
// Inverse on canonical forms; null points get the zero vector.
L0Element cond_to_l0(const FiniteMeasureSpace& space, const CondVector& v);

L0Element l0_add(const L0Element& x, const L0Element& y);
L0Element l0_scale(double a, const L0Element& x);
// Pointwise Euclidean norm, a scalar element: |x|_0(w) = |x(w)|.
L0Element l0_norm(const L0Element& x);
// Pointwise dot pairing <x, y>(w) = <x(w), y(w)>, a scalar element.
L0Element l0_pairing(const L0Element& x, const L0Element& y);

// Concatenation along a partition of the algebra: on each atom of block j
// the value of family[j]. Null points take the values of family[0]'s
// representative (any representative is acceptable; we fix this one).
L0Element l0_concatenate(const Partition& p, std::span<const L0Element> family);

// Essential supremum of a nonempty family of scalar elements. The pointwise
// supremum formula is applied at null points too, fixing the representative.
L0Element ess_sup_l0(std::span<const L0Element> family);

}  // namespace condual
