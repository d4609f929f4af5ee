#include "condual/dual_pair.hpp"

#include <cmath>
#include <random>

namespace condual {

namespace {

// Worst-case Euclidean length over the primal-norm unit ball, used to turn
// a primal-ball radius into a Euclidean one.
double ball_to_euclidean(NormKind k, int n) {
  switch (k) {
    case NormKind::euclidean: return 1.0;
    case NormKind::l1: return 1.0;
    case NormKind::linf: return std::sqrt(static_cast<double>(n));
  }
  throw std::logic_error("ball_to_euclidean: bad kind");
}

}  // namespace

double base_pairing(const DualPairConfig& cfg, std::span<const double> x,
                    std::span<const double> y) {
  require(x.size() == static_cast<size_t>(cfg.n) && y.size() == x.size(),
          "base_pairing: dimension mismatch");
  if (cfg.kind == PairingKind::dot) return dot(x, y);
  double s = 0.0;
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.n; ++j) s += x[i] * cfg.weight[i * cfg.n + j] * y[j];
  return s;
}

DualPairConfig make_dual_pair(int n) {
  require(n >= 1, "make_dual_pair: dimension must be positive");
  return DualPairConfig{n, PairingKind::dot, {}, NormKind::euclidean, NormKind::euclidean};
}

DualPairConfig make_weighted_dual_pair(int n, std::vector<double> weight, NormKind primal,
                                       NormKind dual, std::uint64_t validation_seed) {
  require(n >= 1, "make_weighted_dual_pair: dimension must be positive");
  require(weight.size() == static_cast<size_t>(n) * n, "make_weighted_dual_pair: W must be n*n");
  reject_nan(weight, "make_weighted_dual_pair");
  DualPairConfig cfg{n, PairingKind::weighted, std::move(weight), primal, dual};
  std::mt19937_64 rng(validation_seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n), y(n);
  for (int trial = 0; trial < 2000; ++trial) {
    for (int i = 0; i < n; ++i) x[i] = u(rng);
    for (int i = 0; i < n; ++i) y[i] = u(rng);
    double p = std::fabs(base_pairing(cfg, x, y));
    double bound = norm_of(x, primal) * norm_of(y, dual);
    if (p > bound * (1.0 + 1e-12))
      throw std::invalid_argument(
          "make_weighted_dual_pair: pairing is not compatible with the norms "
          "(|<x,y>| > |x||y| on a sampled pair)");
  }
  return cfg;
}

CondExtReal pairing_s(const DualPairConfig& cfg, const StepValue<Point>& x,
                      const StepValue<Point>& y) {
  require_same_algebra(x.algebra_size(), y.algebra_size(), "pairing_s");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k)
    out[k] = base_pairing(cfg, x.at_atom(k), y.at_atom(k));
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondExtReal pairing_c(const DualPairConfig& cfg, const CondVector& x, const CondVector& y) {
  require_same_algebra(x.algebra_size(), y.algebra_size(), "pairing_c");
  require(x.dim() == cfg.n && y.dim() == cfg.n, "pairing_c: dimension mismatch");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = base_pairing(cfg, x.atom(k), y.atom(k));
  return CondExtReal(x.algebra_size(), std::move(out));
}

Separation separate(const DualPairConfig& cfg, const CondVector& x,
                    const CondExtReal& exclusion_radius) {
  require_same_algebra(x.algebra_size(), exclusion_radius.algebra_size(), "separate");
  require(x.dim() == cfg.n, "separate: dimension mismatch");
  require(exclusion_radius.all_finite(), "separate: radius must be finite");
  const int n = cfg.n, d = x.algebra_size();
  const double to_euclid = ball_to_euclidean(cfg.primal_norm, n);

  std::vector<double> dir(static_cast<size_t>(n) * d, 0.0);
  std::vector<double> margin(d, 0.0);
  std::uint64_t support_mask = 0;
  for (int k = 0; k < d; ++k) {
    double nx = norm2(x.atom(k));
    if (nx == 0.0) continue;
    support_mask |= std::uint64_t{1} << k;
    double r = exclusion_radius[k];
    require(r >= 0.0, "separate: radius must be nonnegative");
    if (r >= nx)
      throw std::domain_error(
          "separate: exclusion radius reaches the point; separation impossible on an atom of "
          "the support");
    double m = nx - 0.5 * r * to_euclid;
    if (m <= 0.0)
      throw std::domain_error(
          "separate: exclusion radius reaches the point; separation impossible on an atom of "
          "the support");
    margin[k] = m;
    std::vector<double> unit(n);
    for (int i = 0; i < n; ++i) unit[i] = x.atom(k)[i] / nx;
    // <z, y> must reduce to the Euclidean product z . unit; for the weighted
    // pairing that means solving W y = unit.
    std::vector<double> y = (cfg.kind == PairingKind::dot) ? unit
                                                           : solve_dense(cfg.weight, unit);
    for (int i = 0; i < n; ++i) dir[static_cast<size_t>(k) * n + i] = y[i];
  }
  return Separation{CondVector(n, d, std::move(dir)), CondExtReal(d, std::move(margin)),
                    Condition::from_mask(d, support_mask)};
}

}  // namespace condual
