#pragma once

#include "condual/conjugate.hpp"
#include "condual/dual_pair.hpp"

namespace condual {

// f as a function on atom-indexed points, one exact scalar kind per atom.
// exploration_box bounds the search region of sampled infima; a weak
// neighborhood with fewer than n independent test vectors is unbounded, so
// sampling needs a box to explore within.
struct VectorFunction {
  FunctionDescriptor desc;
  GridSpec exploration_box;

  int dim() const { return desc.dim(); }
  int algebra_size() const { return desc.algebra_size(); }
};

// Applies f blockwise: atom k of the result is component k of f at the
// point x carries on atom k. This is the unique stable lift of f to step
// values.
CondExtReal step_lift(const VectorFunction& f, const StepValue<Point>& x);
CondExtReal step_lift(const VectorFunction& f, const CondVector& x);

// { z : |<z_k - center_k, y>| <= radius_k for every test vector y of atom k },
// atom by atom. The per-atom test families may have different lengths.
struct WeakNeighborhood {
  CondVector center;
  CondExtReal radius;                            // finite, > 0 per atom
  std::vector<std::vector<Point>> atom_tests;    // test vectors per atom
};

WeakNeighborhood make_weak_neighborhood(CondVector center, CondExtReal radius,
                                        std::vector<std::vector<Point>> atom_tests);
// Basis test vectors e_1..e_n on every atom: the box |z_i - c_i| <= r.
WeakNeighborhood basis_neighborhood(const CondVector& center, double radius);

// The condition on which z lies in V.
Condition member_on(const WeakNeighborhood& v, const CondVector& z);

// Upper estimate of inf { f(z)_k : z in the atom-k slab intersection },
// computed atom by atom as the minimum of f over candidate points:
//   - the center;
//   - exact slab extreme points: for one test vector the two points
//     c +- r y / |y|^2, for two the four corner solutions of the 2x2 Gram
//     system (these realize the infimum of any affine function, which is
//     the closed form the shipped descriptors reduce to at their kinks);
//   - the descriptor's distinguished points (unconstrained minimizers,
//     box corners, knots) projected into the slabs by cyclic projection;
//   - `budget` seeded quasi-random points projected the same way.
// Candidates are generated as a deterministic stream, so a larger budget
// only extends the candidate set: the estimate never increases with budget.
CondExtReal lsc_value_weak(const VectorFunction& f, const WeakNeighborhood& v, int budget,
                           std::uint64_t seed);

// Same estimate over the closed Euclidean ball |z - center| <= radius.
CondExtReal lsc_value_ball(const VectorFunction& f, const CondVector& center, double radius,
                           int budget, std::uint64_t seed);

enum class NeighborhoodKind { weak_basis, norm_ball };

struct LscSchedule {
  std::vector<double> radii;  // strictly decreasing, e.g. 1, 1/2, ..., 2^-(m-1)
  int budget = 128;
  std::uint64_t seed = 1;
};

// Geometric radii 2^0 .. 2^-(levels-1): deep enough that the neighborhood
// infimum of a locally Lipschitz function climbs to within ~L * 2e-6 of its
// value, far below the default gap tolerance of is_lsc_at.
LscSchedule default_schedule(int levels = 20, int budget = 128, std::uint64_t seed = 1);

struct LscAtResult {
  bool lsc = false;
  CondExtReal gap;                       // f(x) - sup of neighborhood infima
  std::vector<CondExtReal> level_values; // one estimated infimum per radius
};

// Checks f(x) <= sup over the shrinking neighborhoods of the estimated
// infimum, within tol atomwise. The estimates are upper bounds of the true
// infima, so the computed gap is a lower bound of the true one: a reported
// failure is always genuine, while a pass relies on the sampled infima
// being tight (exact for the shipped descriptor kinds, whose minimizers
// over slabs are among the deterministic candidates). Atoms where both
// f(x) and the supremum are +inf have gap 0.
LscAtResult is_lsc_at(const VectorFunction& f, const Point& x, const LscSchedule& schedule,
                      NeighborhoodKind kind, double tol = 1e-4);

// The maximal conditionally convex lsc extension, evaluated atomwise: atom k
// of the result is the closed convex envelope of component k at the atom-k
// point of xc. Requires every component proper and convex; for such inputs
// the envelope is the override-free base evaluation. Cross-checked against
// grid biconjugation in the test suite.
CondExtReal cond_extend(const VectorFunction& f, const CondVector& xc);

}  // namespace condual
