#include "condual/cond_real.hpp"

#include <algorithm>
#include <cmath>

namespace condual {

namespace {

void same_algebra(const CondExtReal& x, const CondExtReal& y, const char* op) {
  require_same_algebra(x.algebra_size(), y.algebra_size(), op);
}

double add_ext(double a, double b) {
  if (std::isinf(a) && std::isinf(b) && (a > 0) != (b > 0))
    throw std::domain_error("add: (+inf) + (-inf) has no value");
  return a + b;
}

double mul_ext(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;  // 0 * inf = 0 by convention
  return a * b;
}

}  // namespace

bool CondExtReal::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

CondExtReal add(const CondExtReal& x, const CondExtReal& y) {
  same_algebra(x, y, "add");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = add_ext(x[k], y[k]);
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondExtReal neg(const CondExtReal& x) {
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = -x[k];
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondExtReal sub(const CondExtReal& x, const CondExtReal& y) { return add(x, neg(y)); }

CondExtReal mul(const CondExtReal& x, const CondExtReal& y) {
  same_algebra(x, y, "mul");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = mul_ext(x[k], y[k]);
  return CondExtReal(x.algebra_size(), std::move(out));
}

double sub_inf_convention(double x, double y) {
  if (y == kInf) return -kInf;
  if (x == -kInf) return -kInf;
  if (y == -kInf) return kInf;
  return x - y;  // y finite: IEEE handles x = +inf
}

CondExtReal sub_inf_convention(const CondExtReal& x, const CondExtReal& y) {
  same_algebra(x, y, "sub_inf_convention");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = sub_inf_convention(x[k], y[k]);
  return CondExtReal(x.algebra_size(), std::move(out));
}

bool leq(const CondExtReal& x, const CondExtReal& y) {
  same_algebra(x, y, "leq");
  for (int k = 0; k < x.algebra_size(); ++k)
    if (!(x[k] <= y[k])) return false;
  return true;
}

Condition cond_leq(const CondExtReal& x, const CondExtReal& y) {
  same_algebra(x, y, "cond_leq");
  std::uint64_t m = 0;
  for (int k = 0; k < x.algebra_size(); ++k)
    if (x[k] <= y[k]) m |= std::uint64_t{1} << k;
  return Condition::from_mask(x.algebra_size(), m);
}

Condition strict_on(const CondExtReal& x, const CondExtReal& y) {
  same_algebra(x, y, "strict_on");
  std::uint64_t m = 0;
  for (int k = 0; k < x.algebra_size(); ++k)
    if (x[k] < y[k]) m |= std::uint64_t{1} << k;
  return Condition::from_mask(x.algebra_size(), m);
}

CondExtReal ess_sup(std::span<const CondExtReal> family) {
  require(!family.empty(), "ess_sup: empty family");
  CondExtReal acc = family[0];
  for (size_t i = 1; i < family.size(); ++i) acc = max(acc, family[i]);
  return acc;
}

CondExtReal ess_inf(std::span<const CondExtReal> family) {
  require(!family.empty(), "ess_inf: empty family");
  CondExtReal acc = family[0];
  for (size_t i = 1; i < family.size(); ++i) acc = min(acc, family[i]);
  return acc;
}

CondExtReal min(const CondExtReal& x, const CondExtReal& y) {
  same_algebra(x, y, "min");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = std::min(x[k], y[k]);
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondExtReal max(const CondExtReal& x, const CondExtReal& y) {
  same_algebra(x, y, "max");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = std::max(x[k], y[k]);
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondExtReal cond_abs(const CondExtReal& x) {
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = std::fabs(x[k]);
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondExtReal arctan_c(const CondExtReal& x) {
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = std::atan(x[k]);
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondExtReal scale(double s, const CondExtReal& x) {
  reject_nan(std::span<const double>(&s, 1), "scale");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = mul_ext(s, x[k]);
  return CondExtReal(x.algebra_size(), std::move(out));
}

}  // namespace condual
