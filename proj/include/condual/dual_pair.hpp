#pragma once

#include <cstdint>

#include "condual/conditional_metric.hpp"

namespace condual {

enum class PairingKind {
  dot,       // <x, y> = sum x_i y_i
  weighted,  // <x, y> = x' W y
};

// A dual pair of R^n with itself: a bilinear pairing plus a norm on each
// side satisfying |<x, y>| <= |x| |y|. The bound is validated on seeded
// random samples when the configuration is built.
struct DualPairConfig {
  int n = 1;
  PairingKind kind = PairingKind::dot;
  std::vector<double> weight;  // n*n row-major; empty for the dot pairing
  NormKind primal_norm = NormKind::euclidean;
  NormKind dual_norm = NormKind::euclidean;
};

DualPairConfig make_dual_pair(int n);
// Throws std::invalid_argument if sampling finds |x' W y| > |x| |y|.
DualPairConfig make_weighted_dual_pair(int n, std::vector<double> weight,
                                       NormKind primal = NormKind::euclidean,
                                       NormKind dual = NormKind::euclidean,
                                       std::uint64_t validation_seed = 1);

double base_pairing(const DualPairConfig& cfg, std::span<const double> x,
                    std::span<const double> y);

// Stable atomwise pairing of step values: blockwise values of the spliced
// inputs pair block against block on the meet of their conditions, which on
// the total atom map is exactly one pairing per atom.
CondExtReal pairing_s(const DualPairConfig& cfg, const StepValue<Point>& x,
                      const StepValue<Point>& y);
// The unique continuous bilinear extension to atom-indexed points; at a
// finite atom count it is again the atomwise pairing.
CondExtReal pairing_c(const DualPairConfig& cfg, const CondVector& x, const CondVector& y);

struct Separation {
  CondVector direction;  // y with <z, y> >= margin for z near x, on support
  CondExtReal margin;    // strictly positive on support, 0 elsewhere
  Condition support;     // the condition where x is nonzero
};

// Separates x from the shifted unit-ball exclusion zone: on the support
// condition a = {atoms with x_k != 0}, returns y with
//   <z, y> >= margin > 0 for every z with |z - x| <= exclusion_radius / 2.
// For the dot pairing y_k = x_k / |x_k|; the weighted pairing solves
// W y_k = x_k / |x_k| so the same Euclidean margin applies. Throws if
// exclusion_radius >= |x| on some atom of the support.
Separation separate(const DualPairConfig& cfg, const CondVector& x,
                    const CondExtReal& exclusion_radius);

}  // namespace condual
