#pragma once

#include <functional>
#include <optional>
#include <span>

#include "condual/cond_real.hpp"

namespace condual {

// An atom-indexed point of R^n: the completed counterpart of StepValue<Point>.
// At a finite atom count the completion adds nothing, so this is the same
// data under a type that marks "limit object" rather than "step object".
class CondVector {
 public:
  CondVector(int n, int d, std::vector<double> flat) : n_(n), d_(d), data_(std::move(flat)) {
    require(n >= 1, "CondVector: dimension must be positive");
    require(d >= 1 && d <= Condition::kMaxAtoms, "CondVector: atom count out of range");
    require(data_.size() == static_cast<size_t>(n) * d, "CondVector: flat size must be n*d");
    reject_nan(data_, "CondVector");
    for (double x : data_) require(std::isfinite(x), "CondVector: entries must be finite");
  }
  CondVector(int n, const std::vector<Point>& per_atom);

  static CondVector constant(int d, const Point& x);

  int dim() const { return n_; }
  int algebra_size() const { return d_; }
  std::span<const double> atom(int k) const {
    return std::span<const double>(data_.data() + static_cast<size_t>(k) * n_, n_);
  }
  Point atom_point(int k) const;

  friend bool operator==(const CondVector&, const CondVector&) = default;

 private:
  int n_, d_;
  std::vector<double> data_;  // atom-major: d blocks of n coordinates
};

CondVector cv_add(const CondVector& x, const CondVector& y);
CondVector cv_sub(const CondVector& x, const CondVector& y);
CondVector cv_scale(double s, const CondVector& x);
// Atomwise scaling by a finite conditional scalar.
CondVector cv_scale(const CondExtReal& s, const CondVector& x);
CondExtReal cv_norm(const CondVector& x, NormKind k = NormKind::euclidean);
CondExtReal cv_dot(const CondVector& x, const CondVector& y);
CondVector concatenate(const Partition& p, std::span<const CondVector> pieces);

enum class Metric {
  euclidean,  // |x - y|_2
  l1,         // |x - y|_1
  linf,       // max_i |x_i - y_i|
  arctan,     // n = 1 only: |atan x - atan y|, the bounded metric on the line
};

double base_metric(std::span<const double> x, std::span<const double> y, Metric m);

// Atomwise distance. Both overloads share base_metric, so the embedding of
// step values into CondVector is an isometry down to the last bit.
CondExtReal step_metric(const CondVector& x, const CondVector& y, Metric m);
CondExtReal step_metric(const StepValue<Point>& x, const StepValue<Point>& y, Metric m);

// Identity on the atom-map representation; only the type changes.
CondVector embed(const StepValue<Point>& x);
StepValue<Point> as_step(const CondVector& x);

// A sequence of atom-indexed points. eval must be pure: same index, same
// value, safe to call from any thread.
struct CondSequence {
  int n = 1;
  int d = 1;
  std::function<CondVector(int)> eval;                    // index k >= 1
  std::function<CondExtReal(int)> declared_tol = nullptr; // optional modulus
};

struct CauchyCheck {
  bool verified = false;
  int witness = 0;        // least index from which all pairs stay within r
  CondExtReal worst;      // max pairwise distance over [witness, horizon]
};

// Scans indices 1..horizon for the least k such that every pair m, m' in
// [k, horizon] satisfies step_metric(s(m), s(m')) <= r atomwise. A single
// integer witness is used (the atomwise maximum of per-atom witnesses),
// which is always a valid witness.
CauchyCheck is_cauchy(const CondSequence& s, const CondExtReal& r, int horizon,
                      Metric m = Metric::euclidean);

// Returns the realized limit s(horizon) after verifying the sequence is
// Cauchy at tolerance tol/2 over the horizon; then every tail point from the
// witness on is within tol of the result. Throws if verification fails.
CondVector cond_limit(const CondSequence& s, const CondExtReal& tol, int horizon,
                      Metric m = Metric::euclidean);

// A scalar function with a declared modulus of continuity:
// |x - y| <= modulus_delta(eps) implies |f(x) - f(y)| <= eps.
struct UniformlyContinuousFn {
  int n = 1;
  std::function<double(std::span<const double>)> eval;
  std::function<double(double)> modulus_delta;
};

UniformlyContinuousFn uc_norm(int n, NormKind k = NormKind::euclidean);
UniformlyContinuousFn uc_linear(Point coeffs);
UniformlyContinuousFn uc_arctan();  // n = 1

// Extends f to atom-indexed points by applying it on each atom. On embedded
// step values this agrees with the stable atomwise application, and it is
// the unique uniformly continuous such extension.
CondExtReal uc_extend(const UniformlyContinuousFn& f, const CondVector& x);

}  // namespace condual
