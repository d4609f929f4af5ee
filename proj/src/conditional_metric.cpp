#include "condual/conditional_metric.hpp"

#include <algorithm>
#include <cmath>

namespace condual {

CondVector::CondVector(int n, const std::vector<Point>& per_atom)
    : CondVector(n, static_cast<int>(per_atom.size()), [&] {
        std::vector<double> flat;
        flat.reserve(per_atom.size() * n);
        for (const Point& p : per_atom) {
          require(p.size() == static_cast<size_t>(n), "CondVector: point dimension mismatch");
          flat.insert(flat.end(), p.begin(), p.end());
        }
        return flat;
      }()) {}

CondVector CondVector::constant(int d, const Point& x) {
  std::vector<double> flat;
  flat.reserve(x.size() * d);
  for (int k = 0; k < d; ++k) flat.insert(flat.end(), x.begin(), x.end());
  return CondVector(static_cast<int>(x.size()), d, std::move(flat));
}

Point CondVector::atom_point(int k) const {
  auto s = atom(k);
  return Point(s.begin(), s.end());
}

static void same_shape(const CondVector& x, const CondVector& y, const char* op) {
  require_same_algebra(x.algebra_size(), y.algebra_size(), op);
  require(x.dim() == y.dim(), "CondVector: dimension mismatch");
}

CondVector cv_add(const CondVector& x, const CondVector& y) {
  same_shape(x, y, "cv_add");
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(x.dim()) * x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) {
    auto a = x.atom(k), b = y.atom(k);
    for (int i = 0; i < x.dim(); ++i) flat.push_back(a[i] + b[i]);
  }
  return CondVector(x.dim(), x.algebra_size(), std::move(flat));
}

CondVector cv_sub(const CondVector& x, const CondVector& y) { return cv_add(x, cv_scale(-1.0, y)); }

CondVector cv_scale(double s, const CondVector& x) {
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(x.dim()) * x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k)
    for (double v : x.atom(k)) flat.push_back(s * v);
  return CondVector(x.dim(), x.algebra_size(), std::move(flat));
}

CondVector cv_scale(const CondExtReal& s, const CondVector& x) {
  require_same_algebra(s.algebra_size(), x.algebra_size(), "cv_scale");
  require(s.all_finite(), "cv_scale: scalar must be finite");
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(x.dim()) * x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k)
    for (double v : x.atom(k)) flat.push_back(s[k] * v);
  return CondVector(x.dim(), x.algebra_size(), std::move(flat));
}

CondExtReal cv_norm(const CondVector& x, NormKind k) {
  std::vector<double> out(x.algebra_size());
  for (int a = 0; a < x.algebra_size(); ++a) out[a] = norm_of(x.atom(a), k);
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondExtReal cv_dot(const CondVector& x, const CondVector& y) {
  same_shape(x, y, "cv_dot");
  std::vector<double> out(x.algebra_size());
  for (int a = 0; a < x.algebra_size(); ++a) out[a] = dot(x.atom(a), y.atom(a));
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondVector concatenate(const Partition& p, std::span<const CondVector> pieces) {
  require(pieces.size() == p.size(), "concatenate: needs exactly one value per block");
  require(!pieces.empty(), "concatenate: empty partition");
  const int d = p.algebra_size();
  const int n = pieces[0].dim();
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(n) * d);
  for (int k = 0; k < d; ++k) {
    const CondVector& piece = pieces[p.block_of_atom(k)];
    require_same_algebra(piece.algebra_size(), d, "concatenate");
    require(piece.dim() == n, "concatenate: dimension mismatch");
    auto s = piece.atom(k);
    flat.insert(flat.end(), s.begin(), s.end());
  }
  return CondVector(n, d, std::move(flat));
}

double base_metric(std::span<const double> x, std::span<const double> y, Metric m) {
  require(x.size() == y.size(), "base_metric: dimension mismatch");
  switch (m) {
    case Metric::euclidean: {
      double s = 0.0;
      for (size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(s);
    }
    case Metric::l1: {
      double s = 0.0;
      for (size_t i = 0; i < x.size(); ++i) s += std::fabs(x[i] - y[i]);
      return s;
    }
    case Metric::linf: {
      double s = 0.0;
      for (size_t i = 0; i < x.size(); ++i) s = std::max(s, std::fabs(x[i] - y[i]));
      return s;
    }
    case Metric::arctan:
      require(x.size() == 1, "base_metric: the arctan metric is one-dimensional");
      return std::fabs(std::atan(x[0]) - std::atan(y[0]));
  }
  throw std::logic_error("base_metric: bad kind");
}

CondExtReal step_metric(const CondVector& x, const CondVector& y, Metric m) {
  same_shape(x, y, "step_metric");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) out[k] = base_metric(x.atom(k), y.atom(k), m);
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondExtReal step_metric(const StepValue<Point>& x, const StepValue<Point>& y, Metric m) {
  require_same_algebra(x.algebra_size(), y.algebra_size(), "step_metric");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k)
    out[k] = base_metric(x.at_atom(k), y.at_atom(k), m);
  return CondExtReal(x.algebra_size(), std::move(out));
}

CondVector embed(const StepValue<Point>& x) {
  return CondVector(static_cast<int>(x.at_atom(0).size()), x.per_atom());
}

StepValue<Point> as_step(const CondVector& x) {
  std::vector<Point> per_atom;
  per_atom.reserve(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) per_atom.push_back(x.atom_point(k));
  return StepValue<Point>(x.algebra_size(), std::move(per_atom));
}

CauchyCheck is_cauchy(const CondSequence& s, const CondExtReal& r, int horizon, Metric m) {
  require(s.eval != nullptr, "is_cauchy: sequence has no eval");
  require(horizon >= 1, "is_cauchy: horizon must be at least 1");
  require_same_algebra(s.d, r.algebra_size(), "is_cauchy");
  std::vector<CondVector> pts;
  pts.reserve(horizon);
  for (int k = 1; k <= horizon; ++k) {
    CondVector v = s.eval(k);
    require(v.dim() == s.n && v.algebra_size() == s.d, "is_cauchy: eval shape drifted");
    pts.push_back(std::move(v));
  }
  // suffix_worst[k] = max pairwise distance among pts[k..end], atomwise.
  const int d = s.d;
  std::vector<CondExtReal> suffix_worst(horizon, CondExtReal::constant(d, 0.0));
  for (int k = horizon - 2; k >= 0; --k) {
    CondExtReal w = suffix_worst[k + 1];
    for (int j = k + 1; j < horizon; ++j) w = max(w, step_metric(pts[k], pts[j], m));
    suffix_worst[k] = w;
  }
  // The witness window [k, horizon] must contain at least two indices (unless
  // horizon == 1): a single-point window satisfies any bound vacuously and
  // would verify every sequence.
  const int last = horizon == 1 ? 0 : horizon - 2;
  for (int k = 0; k <= last; ++k) {
    if (leq(suffix_worst[k], r)) return CauchyCheck{true, k + 1, suffix_worst[k]};
  }
  return CauchyCheck{false, 0, suffix_worst.empty() ? CondExtReal::constant(d, 0.0)
                                                    : suffix_worst[0]};
}

CondVector cond_limit(const CondSequence& s, const CondExtReal& tol, int horizon, Metric m) {
  CauchyCheck c = is_cauchy(s, scale(0.5, tol), horizon, m);
  if (!c.verified)
    throw std::domain_error("cond_limit: Cauchy verification failed over the horizon");
  CondVector limit = s.eval(horizon);
  // Every tail point sits within tol/2 of the realized limit, hence within tol.
  for (int k = c.witness; k <= horizon; ++k)
    require(leq(step_metric(s.eval(k), limit, m), tol), "cond_limit: tail escaped tolerance");
  return limit;
}

UniformlyContinuousFn uc_norm(int n, NormKind k) {
  return UniformlyContinuousFn{
      n, [k](std::span<const double> x) { return norm_of(x, k); },
      [](double eps) { return eps; }};
}

UniformlyContinuousFn uc_linear(Point coeffs) {
  double c2 = norm2(coeffs);
  int n = static_cast<int>(coeffs.size());
  return UniformlyContinuousFn{
      n,
      [c = std::move(coeffs)](std::span<const double> x) {
        return dot(std::span<const double>(c.data(), c.size()), x);
      },
      [c2](double eps) { return c2 > 0 ? eps / c2 : 1.0; }};
}

UniformlyContinuousFn uc_arctan() {
  return UniformlyContinuousFn{1, [](std::span<const double> x) { return std::atan(x[0]); },
                               [](double eps) { return eps; }};
}

CondExtReal uc_extend(const UniformlyContinuousFn& f, const CondVector& x) {
  require(f.eval != nullptr, "uc_extend: function has no eval");
  require(f.n == x.dim(), "uc_extend: dimension mismatch");
  std::vector<double> out(x.algebra_size());
  for (int k = 0; k < x.algebra_size(); ++k) {
    out[k] = f.eval(x.atom(k));
    require(!std::isnan(out[k]), "uc_extend: function produced NaN");
  }
  return CondExtReal(x.algebra_size(), std::move(out));
}

}  // namespace condual
