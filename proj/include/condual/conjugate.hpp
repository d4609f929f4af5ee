#pragma once

#include "condual/function_catalog.hpp"

namespace condual {

enum class ConjMethod { brute, fast };

// f*(y)_k = max over primal nodes x of <x, y> - f(x)_k, one value per dual
// node and atom. +inf primal values never achieve the max; an atom that is
// +inf on every node raises properness_error, as does any -inf input.
// The result is finite everywhere, convex along grid lines, and lsc.
//
// Direct O(N * M) scan per atom.
GridFunction conjugate_brute(const GridFunction& f, const GridSpec& dual, int threads = 1);

// Same values within 1e-9, via one monotone-argmax transform per axis:
// the maximizing primal index is nondecreasing in the dual coordinate, so a
// divide-and-conquer over dual nodes costs O((N + M) log M) per line. Axes
// beyond the first are handled by successive one-dimensional transforms
// (the sup over a rectangular grid factors coordinate-wise), with a sign
// flip between passes.
GridFunction conjugate_fast(const GridFunction& f, const GridSpec& dual, int threads = 1);

GridFunction conjugate(const GridFunction& f, const GridSpec& dual, ConjMethod m,
                       int threads = 1);

// (f*)* evaluated back on f's own grid: the closed convex hull of f as seen
// through the bounded dual grid.
GridFunction biconjugate(const GridFunction& f, const GridSpec& dual, ConjMethod m,
                         int threads = 1);

struct LscConvexCheck {
  bool lsc_convex = false;
  double max_gap = 0.0;     // worst |f - f**| over nodes where f is finite
  size_t worst_node = 0;
  int worst_atom = 0;
  bool pattern_mismatch = false;  // f** reached +inf where f is finite
};

// True iff f agrees with its biconjugate within tol on every finite node.
// A bounded dual grid cannot reproduce +inf values, so nodes where f is
// +inf are excluded from the comparison; the check still fails if f**
// comes out +inf where f is finite.
LscConvexCheck is_lsc_convex(const GridFunction& f, const GridSpec& dual, double tol,
                             ConjMethod m = ConjMethod::fast, int threads = 1);

struct DualityPointRow {
  Point requested;                     // the point as given
  size_t node = 0;                     // nearest primal node (flat index)
  Point x;                             // its coordinates; all values are taken here
  std::vector<double> value;           // f(x)_k, exact from the descriptor
  std::vector<double> representation;  // max_y <x,y> - f*(y), per atom
  std::vector<double> residual;        // value - representation
  std::vector<size_t> argmax_node;     // flat dual index per atom, ties to the
                                       // lexicographically smallest node
};

struct DualityReport {
  bool pass = false;
  double tol = 0.0;
  double max_residual = -kInf;
  double min_residual = kInf;
  size_t worst_point = 0;  // index into rows, of the largest residual
  int worst_atom = 0;
  bool negative_residual_bug = false;  // residual < -tol: conjugation bug
  bool dual_grid_truncated = false;    // dual grid misses subgradient range
  std::vector<DualityPointRow> rows;
};

// Verifies the biconjugation identity f(x) = max_y (<x, y> - f*(y)) at the
// given points, per atom. Points are snapped to the nearest primal node:
// there f*(y) >= <x, y> - f(x) holds term by term, so residuals are
// nonnegative up to rounding and bounded by the discretization tolerance.
// PASS iff every residual lies in [-1e-12, tol]; a residual below -tol is
// additionally flagged as a conjugation bug. tol <= 0 resolves to
// tol_disc(f, primal).
DualityReport check_duality(const FunctionDescriptor& f, std::span<const Point> test_points,
                            const GridSpec& primal, const GridSpec& dual, double tol = 0.0,
                            ConjMethod m = ConjMethod::fast, int threads = 1);

// Smallest slack of f(x)_k + f*(y)_k - <x, y> over all (node, dual node,
// atom) triples. Nonnegative up to rounding whenever fstar really is the
// conjugate of f over these grids; +inf values give +inf slack.
double young_fenchel_min_slack(const GridFunction& f, const GridFunction& fstar);

}  // namespace condual
