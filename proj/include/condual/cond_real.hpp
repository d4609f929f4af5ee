#pragma once

#include <span>
#include <vector>

#include "condual/step_value.hpp"

namespace condual {

// An atom-indexed extended real: one value in [-inf, +inf] per atom.
// NaN is rejected at every construction site; the arithmetic below is
// written so it can never produce one.
class CondExtReal {
 public:
  CondExtReal(int d, std::vector<double> vals) : d_(d), v_(std::move(vals)) {
    require(d >= 1 && d <= Condition::kMaxAtoms, "CondExtReal: atom count out of range");
    require(v_.size() == static_cast<size_t>(d), "CondExtReal: needs one value per atom");
    reject_nan(v_, "CondExtReal");
  }
  // Members initialize in declaration order, so d_ reads the size before v_
  // moves the vector out.
  explicit CondExtReal(std::vector<double> vals)
      : d_(static_cast<int>(vals.size())), v_(std::move(vals)) {
    require(d_ >= 1 && d_ <= Condition::kMaxAtoms, "CondExtReal: atom count out of range");
    reject_nan(v_, "CondExtReal");
  }

  static CondExtReal constant(int d, double v) { return CondExtReal(d, std::vector<double>(d, v)); }

  int algebra_size() const { return d_; }
  double operator[](int k) const { return v_[k]; }
  std::span<const double> values() const { return v_; }
  bool all_finite() const;

  StepValue<double> as_step() const { return StepValue<double>(d_, v_); }
  static CondExtReal from_step(const StepValue<double>& s) {
    return CondExtReal(s.algebra_size(), s.per_atom());
  }

  friend bool operator==(const CondExtReal&, const CondExtReal&) = default;

 private:
  int d_;
  std::vector<double> v_;
};

// Extended addition. Opposite infinities on any atom are an error; there is
// no convention that makes (+inf) + (-inf) a value.
CondExtReal add(const CondExtReal& x, const CondExtReal& y);
CondExtReal neg(const CondExtReal& x);
// add(x, neg(y)), with the same indeterminate-form error.
CondExtReal sub(const CondExtReal& x, const CondExtReal& y);
// Extended multiplication with 0 * (+-inf) = 0.
CondExtReal mul(const CondExtReal& x, const CondExtReal& y);

// Total subtraction for sup-style scores: anything - (+inf) = -inf, and
// p - (-inf) = +inf for p above -inf. The remaining corner (-inf) - (-inf)
// is fixed at -inf (a -inf score stays -inf no matter what is subtracted).
CondExtReal sub_inf_convention(const CondExtReal& x, const CondExtReal& y);
double sub_inf_convention(double x, double y);

// x <= y on every atom.
bool leq(const CondExtReal& x, const CondExtReal& y);
// The condition on which x <= y.
Condition cond_leq(const CondExtReal& x, const CondExtReal& y);
// The condition on which x < y. Strictness is always reported as the
// condition where it holds; there is no scalar "conditionally strict" bool.
Condition strict_on(const CondExtReal& x, const CondExtReal& y);

// Atomwise extrema of a nonempty family.
CondExtReal ess_sup(std::span<const CondExtReal> family);
CondExtReal ess_inf(std::span<const CondExtReal> family);

CondExtReal min(const CondExtReal& x, const CondExtReal& y);
CondExtReal max(const CondExtReal& x, const CondExtReal& y);

// |x|: equals x on the condition where x >= 0 and -x on its complement.
CondExtReal cond_abs(const CondExtReal& x);

// Atomwise arctangent; maps [-inf, +inf] strictly increasingly into
// [-pi/2, pi/2]. The result is always finite.
CondExtReal arctan_c(const CondExtReal& x);

CondExtReal scale(double s, const CondExtReal& x);

}  // namespace condual
