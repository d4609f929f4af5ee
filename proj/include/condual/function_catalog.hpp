#pragma once

#include <optional>
#include <string>
#include <variant>

#include "condual/grid.hpp"

namespace condual {

// ----- per-atom scalar function kinds, all with exact pointwise evaluation -----

// 0.5 x'Qx + b'x + c. Convex iff the symmetric part of Q is positive
// semidefinite.
struct QuadraticFn {
  std::vector<double> q;  // n*n row-major
  Point b;
  double c = 0.0;
};

// alpha * |x|_p + offset, alpha >= 0.
struct ScaledNormFn {
  double alpha = 1.0;
  NormKind p = NormKind::euclidean;
  double offset = 0.0;
};

// offset on the box [lo, hi], +inf outside. lo == hi pins a single point;
// lo > hi on any axis makes the function +inf everywhere (improper).
struct IndicatorBoxFn {
  Point lo, hi;
  double offset = 0.0;
};

// max_j (a_j . x + b_j); finite everywhere, always convex.
struct MaxAffineFn {
  struct Plane {
    Point a;
    double b = 0.0;
  };
  std::vector<Plane> planes;
};

// One-dimensional piecewise-affine interpolant of (knot, value) pairs,
// +inf outside [knots.front(), knots.back()]. Knots strictly increasing.
struct PiecewiseAffineFn {
  std::vector<double> knots;
  std::vector<double> values;
};

// Values on the nodes of a declared grid, extended by multilinear
// interpolation inside the grid hull and +inf outside. A point whose cell
// has a +inf corner with positive interpolation weight evaluates to +inf;
// zero-weight corners are ignored, so node and face values stay exact.
struct TableFn {
  GridSpec grid;
  std::vector<double> values;  // one per node
};

// Replaces the value at one exact point. Used for boundary adjustments
// (raised or removed boundary values) in otherwise closed-form functions.
struct PointOverride {
  Point at;
  double value = 0.0;
};

class AtomFunction {
 public:
  using Base = std::variant<QuadraticFn, ScaledNormFn, IndicatorBoxFn, MaxAffineFn,
                            PiecewiseAffineFn, TableFn>;

  AtomFunction(int n, Base base, std::vector<PointOverride> overrides = {});

  int dim() const { return n_; }
  const Base& base() const { return base_; }
  const std::vector<PointOverride>& overrides() const { return overrides_; }

  // Exact value at x, overrides included.
  double eval(std::span<const double> x) const;
  // The base value, overrides dropped. When convex() holds this is the
  // closed convex envelope of eval: valid overrides only raise or delete
  // values at extreme points of the domain, and those sink back to the
  // boundary limit under the envelope.
  double closure_eval(std::span<const double> x) const;

  bool convex(std::string* why = nullptr) const;
  bool proper() const;
  // Lipschitz bound of the finite part of the envelope on the box.
  double lipschitz_on(std::span<const double> lo, std::span<const double> hi) const;
  // Range of the subgradient's j-th coordinate over the box, per axis.
  std::vector<std::pair<double, double>> slope_range_on(std::span<const double> lo,
                                                        std::span<const double> hi) const;

 private:
  int n_;
  Base base_;
  std::vector<PointOverride> overrides_;
};

// A function R^n -> (extended reals)^d: one scalar kind per atom.
class FunctionDescriptor {
 public:
  FunctionDescriptor(int n, std::vector<AtomFunction> components);

  int dim() const { return n_; }
  int algebra_size() const { return static_cast<int>(components_.size()); }
  const AtomFunction& component(int k) const { return components_[k]; }

  CondExtReal eval(std::span<const double> x) const;
  CondExtReal closure_eval(std::span<const double> x) const;
  bool convex(std::string* why = nullptr) const;
  bool proper() const;
  double lipschitz_on(const GridSpec& box) const;  // max over atoms
  std::vector<std::pair<double, double>> slope_range_on(const GridSpec& box) const;

 private:
  int n_;
  std::vector<AtomFunction> components_;
};

// Evaluates the descriptor on every grid node. Flags are taken from the
// descriptor: claimed_convex iff every component passes the convexity test,
// claimed_proper iff every component is proper.
GridFunction sample(const FunctionDescriptor& f, const GridSpec& grid);

// Dual grid when the problem does not pin one: per axis, the subgradient
// range of f over the primal box padded by 1 + 5% of its width, with the
// primal node count.
GridSpec default_dual_grid(const FunctionDescriptor& f, const GridSpec& primal);

// L * h + 1e-9: the brute-force sup over nodes undershoots the true sup by
// at most L * h, L the Lipschitz bound of the envelope's finite part on the
// primal box and h the largest grid spacing.
double tol_disc(const FunctionDescriptor& f, const GridSpec& primal);

}  // namespace condual
