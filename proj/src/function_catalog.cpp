#include "condual/function_catalog.hpp"

#include <algorithm>
#include <cmath>

namespace condual {

namespace {

bool same_point(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

double eval_quadratic(const QuadraticFn& f, std::span<const double> x) {
  const size_t n = x.size();
  double s = f.c;
  for (size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (size_t j = 0; j < n; ++j) row += f.q[i * n + j] * x[j];
    s += 0.5 * x[i] * row + f.b[i] * x[i];
  }
  return s;
}

double eval_box(const IndicatorBoxFn& f, std::span<const double> x) {
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] < f.lo[i] || x[i] > f.hi[i]) return kInf;
  return f.offset;
}

double eval_max_affine(const MaxAffineFn& f, std::span<const double> x) {
  double m = -kInf;
  for (const auto& p : f.planes) m = std::max(m, dot(p.a, x) + p.b);
  return m;
}

double eval_piecewise(const PiecewiseAffineFn& f, double x) {
  if (x < f.knots.front() || x > f.knots.back()) return kInf;
  auto it = std::upper_bound(f.knots.begin(), f.knots.end(), x);
  if (it == f.knots.end()) return f.values.back();
  if (it == f.knots.begin()) return f.values.front();
  size_t hi = static_cast<size_t>(it - f.knots.begin()), lo = hi - 1;
  double t = (x - f.knots[lo]) / (f.knots[hi] - f.knots[lo]);
  return f.values[lo] + t * (f.values[hi] - f.values[lo]);
}

double eval_table(const TableFn& f, std::span<const double> x) {
  const GridSpec& g = f.grid;
  if (!g.contains(x)) return kInf;
  const int n = g.dims();
  int base_idx[3];
  double frac[3];
  for (int j = 0; j < n; ++j) {
    double t = (x[j] - g.axis(j).lo) / g.spacing(j);
    int i = std::clamp(static_cast<int>(std::floor(t)), 0, g.axis(j).count - 2);
    base_idx[j] = i;
    frac[j] = std::clamp(t - i, 0.0, 1.0);
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    int multi[3];
    double w = 1.0;
    for (int j = 0; j < n; ++j) {
      bool hi = (corner >> j) & 1;
      multi[j] = base_idx[j] + (hi ? 1 : 0);
      w *= hi ? frac[j] : (1.0 - frac[j]);
    }
    if (w == 0.0) continue;  // zero-weight corners are ignored, so values at
                             // nodes and on cell faces stay exact
    double v = f.values[g.flat_index(std::span<const int>(multi, n))];
    if (v == kInf) return kInf;  // a positive-weight +inf corner wins
    acc += w * v;
  }
  return acc;
}

// Extreme points of the effective domain are the only places where raising
// or deleting a value preserves convexity.
bool is_extreme_point(const AtomFunction::Base& base, std::span<const double> p) {
  if (const auto* box = std::get_if<IndicatorBoxFn>(&base)) {
    for (size_t i = 0; i < p.size(); ++i)
      if (p[i] != box->lo[i] && p[i] != box->hi[i]) return false;
    for (size_t i = 0; i < p.size(); ++i)
      if (p[i] < box->lo[i] || p[i] > box->hi[i]) return false;
    return true;
  }
  if (const auto* pl = std::get_if<PiecewiseAffineFn>(&base))
    return p[0] == pl->knots.front() || p[0] == pl->knots.back();
  if (const auto* tb = std::get_if<TableFn>(&base)) {
    const GridSpec& g = tb->grid;
    for (int j = 0; j < g.dims(); ++j)
      if (p[j] != g.axis(j).lo && p[j] != g.axis(j).hi) return false;
    return true;
  }
  return false;  // full-domain kinds have no extreme points
}

void corners_of(std::span<const double> lo, std::span<const double> hi,
                std::vector<Point>& out) {
  const int n = static_cast<int>(lo.size());
  out.clear();
  for (int c = 0; c < (1 << n); ++c) {
    Point p(n);
    for (int j = 0; j < n; ++j) p[j] = ((c >> j) & 1) ? hi[j] : lo[j];
    out.push_back(std::move(p));
  }
}

}  // namespace

AtomFunction::AtomFunction(int n, Base base, std::vector<PointOverride> overrides)
    : n_(n), base_(std::move(base)), overrides_(std::move(overrides)) {
  require(n >= 1 && n <= 3, "AtomFunction: dimension must be 1 to 3");
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) {
          require(b.q.size() == static_cast<size_t>(n) * n && b.b.size() == static_cast<size_t>(n),
                  "QuadraticFn: shape mismatch");
          reject_nan(b.q, "QuadraticFn");
          reject_nan(b.b, "QuadraticFn");
          require(std::isfinite(b.c), "QuadraticFn: constant must be finite");
        } else if constexpr (std::is_same_v<T, ScaledNormFn>) {
          require(b.alpha >= 0 && std::isfinite(b.alpha), "ScaledNormFn: alpha must be >= 0");
          require(std::isfinite(b.offset), "ScaledNormFn: offset must be finite");
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          require(b.lo.size() == static_cast<size_t>(n) && b.hi.size() == static_cast<size_t>(n),
                  "IndicatorBoxFn: shape mismatch");
          reject_nan(b.lo, "IndicatorBoxFn");
          reject_nan(b.hi, "IndicatorBoxFn");
          require(std::isfinite(b.offset), "IndicatorBoxFn: offset must be finite");
        } else if constexpr (std::is_same_v<T, MaxAffineFn>) {
          require(!b.planes.empty(), "MaxAffineFn: needs at least one plane");
          for (const auto& pl : b.planes) {
            require(pl.a.size() == static_cast<size_t>(n), "MaxAffineFn: shape mismatch");
            reject_nan(pl.a, "MaxAffineFn");
            require(std::isfinite(pl.b), "MaxAffineFn: offset must be finite");
          }
        } else if constexpr (std::is_same_v<T, PiecewiseAffineFn>) {
          require(n == 1, "PiecewiseAffineFn: one-dimensional only");
          require(b.knots.size() >= 2 && b.knots.size() == b.values.size(),
                  "PiecewiseAffineFn: needs matching knots and values, at least 2");
          for (size_t i = 1; i < b.knots.size(); ++i)
            require(b.knots[i] > b.knots[i - 1], "PiecewiseAffineFn: knots must increase");
          for (double v : b.values)
            require(!std::isnan(v) && v != -kInf && v != kInf,
                    "PiecewiseAffineFn: values must be finite");
        } else if constexpr (std::is_same_v<T, TableFn>) {
          require(b.grid.dims() == n, "TableFn: grid dimension mismatch");
          require(b.values.size() == b.grid.num_nodes(), "TableFn: one value per node");
          for (double v : b.values)
            require(!std::isnan(v) && v != -kInf, "TableFn: values must be above -inf");
        }
      },
      base_);
  for (const PointOverride& o : overrides_) {
    require(o.at.size() == static_cast<size_t>(n), "PointOverride: dimension mismatch");
    reject_nan(o.at, "PointOverride");
    require(!std::isnan(o.value) && o.value != -kInf, "PointOverride: value must be above -inf");
  }
}

double AtomFunction::eval(std::span<const double> x) const {
  require(x.size() == static_cast<size_t>(n_), "AtomFunction: dimension mismatch");
  for (const PointOverride& o : overrides_)
    if (same_point(o.at, x)) return o.value;
  return closure_eval(x);
}

double AtomFunction::closure_eval(std::span<const double> x) const {
  require(x.size() == static_cast<size_t>(n_), "AtomFunction: dimension mismatch");
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) return eval_quadratic(b, x);
        else if constexpr (std::is_same_v<T, ScaledNormFn>) return b.alpha * norm_of(x, b.p) + b.offset;
        else if constexpr (std::is_same_v<T, IndicatorBoxFn>) return eval_box(b, x);
        else if constexpr (std::is_same_v<T, MaxAffineFn>) return eval_max_affine(b, x);
        else if constexpr (std::is_same_v<T, PiecewiseAffineFn>) return eval_piecewise(b, x[0]);
        else return eval_table(b, x);
      },
      base_);
}

bool AtomFunction::convex(std::string* why) const {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (const auto* q = std::get_if<QuadraticFn>(&base_)) {
    auto ev = symmetric_eigenvalues(q->q, n_);
    if (ev.front() < -1e-12 * std::max(1.0, std::fabs(ev.back())))
      return fail("quadratic: Q has a negative eigenvalue");
  } else if (const auto* pl = std::get_if<PiecewiseAffineFn>(&base_)) {
    double prev = -kInf;
    for (size_t i = 1; i < pl->knots.size(); ++i) {
      double s = (pl->values[i] - pl->values[i - 1]) / (pl->knots[i] - pl->knots[i - 1]);
      if (s < prev - 1e-12) return fail("piecewise affine: slopes decrease");
      prev = s;
    }
  } else if (const auto* tb = std::get_if<TableFn>(&base_)) {
    if (n_ != 1)
      return fail("table: multilinear interpolation is not convex beyond one dimension");
    GridFunction gf{tb->grid, 1, tb->values, false, false};
    if (!is_grid_convex(gf, 1e-12)) return fail("table: second differences decrease");
  }
  // ScaledNormFn, IndicatorBoxFn (even empty), MaxAffineFn are convex as such.
  for (const PointOverride& o : overrides_) {
    double closure = closure_eval(o.at);
    if (o.value == closure) continue;
    if (o.value < closure) return fail("override: value below the closed envelope");
    if (!std::isfinite(closure))
      return fail("override: finite value at an isolated point outside the domain");
    if (!is_extreme_point(base_, o.at))
      return fail("override: raised or deleted value away from an extreme point of the domain");
  }
  if (why) why->clear();
  return true;
}

bool AtomFunction::proper() const {
  return std::visit(
      [&](const auto& b) -> bool {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          for (size_t i = 0; i < b.lo.size(); ++i)
            if (b.lo[i] > b.hi[i]) return false;
          // A pinned point deleted by an override leaves nothing finite.
          bool pinned = same_point(b.lo, b.hi);
          if (pinned)
            for (const PointOverride& o : overrides_)
              if (same_point(o.at, b.lo) && o.value == kInf) return false;
          return true;
        } else if constexpr (std::is_same_v<T, TableFn>) {
          for (double v : b.values)
            if (std::isfinite(v)) return true;
          return false;
        } else {
          return true;  // the remaining kinds are finite on open sets
        }
      },
      base_);
}

double AtomFunction::lipschitz_on(std::span<const double> lo, std::span<const double> hi) const {
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) {
          std::vector<Point> cs;
          corners_of(lo, hi, cs);
          double m = 0.0;
          for (const Point& p : cs) {
            double g2 = 0.0;
            for (int i = 0; i < n_; ++i) {
              double gi = b.b[i];
              for (int j = 0; j < n_; ++j)
                gi += 0.5 * (b.q[i * n_ + j] + b.q[j * n_ + i]) * p[j];
              g2 += gi * gi;
            }
            m = std::max(m, std::sqrt(g2));
          }
          return m;
        } else if constexpr (std::is_same_v<T, ScaledNormFn>) {
          return b.alpha * (b.p == NormKind::l1 ? std::sqrt(static_cast<double>(n_)) : 1.0);
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, MaxAffineFn>) {
          double m = 0.0;
          for (const auto& pl : b.planes) m = std::max(m, norm2(pl.a));
          return m;
        } else if constexpr (std::is_same_v<T, PiecewiseAffineFn>) {
          double m = 0.0;
          for (size_t i = 1; i < b.knots.size(); ++i)
            m = std::max(m, std::fabs((b.values[i] - b.values[i - 1]) /
                                      (b.knots[i] - b.knots[i - 1])));
          return m;
        } else {
          auto ranges = slope_range_on(lo, hi);
          double acc = 0.0;
          for (const auto& r : ranges) {
            double mj = std::max(std::fabs(r.first), std::fabs(r.second));
            acc += mj * mj;
          }
          return std::sqrt(acc);
        }
      },
      base_);
}

std::vector<std::pair<double, double>> AtomFunction::slope_range_on(
    std::span<const double> lo, std::span<const double> hi) const {
  std::vector<std::pair<double, double>> out(n_, {0.0, 0.0});
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, QuadraticFn>) {
          std::vector<Point> cs;
          corners_of(lo, hi, cs);
          for (int i = 0; i < n_; ++i) {
            double mn = kInf, mx = -kInf;
            for (const Point& p : cs) {
              double gi = b.b[i];
              for (int j = 0; j < n_; ++j)
                gi += 0.5 * (b.q[i * n_ + j] + b.q[j * n_ + i]) * p[j];
              mn = std::min(mn, gi);
              mx = std::max(mx, gi);
            }
            out[i] = {mn, mx};
          }
        } else if constexpr (std::is_same_v<T, ScaledNormFn>) {
          for (int i = 0; i < n_; ++i) out[i] = {-b.alpha, b.alpha};
        } else if constexpr (std::is_same_v<T, IndicatorBoxFn>) {
          // The finite part is flat; the conjugate's interesting dual range
          // is set by the box size, which the padding of the default dual
          // grid covers at desk scale.
        } else if constexpr (std::is_same_v<T, MaxAffineFn>) {
          for (int i = 0; i < n_; ++i) {
            double mn = kInf, mx = -kInf;
            for (const auto& pl : b.planes) {
              mn = std::min(mn, pl.a[i]);
              mx = std::max(mx, pl.a[i]);
            }
            out[i] = {mn, mx};
          }
        } else if constexpr (std::is_same_v<T, PiecewiseAffineFn>) {
          double mn = kInf, mx = -kInf;
          for (size_t i = 1; i < b.knots.size(); ++i) {
            double s = (b.values[i] - b.values[i - 1]) / (b.knots[i] - b.knots[i - 1]);
            mn = std::min(mn, s);
            mx = std::max(mx, s);
          }
          out[0] = {mn, mx};
        } else {
          const GridSpec& g = b.grid;
          const int n = g.dims();
          for (int axis = 0; axis < n; ++axis) {
            double mn = 0.0, mx = 0.0;
            bool any = false;
            for (size_t node = 0; node < g.num_nodes(); ++node) {
              int multi[3];
              g.unflatten(node, std::span<int>(multi, n));
              if (multi[axis] + 1 >= g.axis(axis).count) continue;
              double v0 = b.values[node];
              multi[axis] += 1;
              double v1 = b.values[g.flat_index(std::span<const int>(multi, n))];
              if (!std::isfinite(v0) || !std::isfinite(v1)) continue;
              double s = (v1 - v0) / g.spacing(axis);
              if (!any) { mn = mx = s; any = true; }
              mn = std::min(mn, s);
              mx = std::max(mx, s);
            }
            out[axis] = {mn, mx};
          }
        }
      },
      base_);
  return out;
}

FunctionDescriptor::FunctionDescriptor(int n, std::vector<AtomFunction> components)
    : n_(n), components_(std::move(components)) {
  require(!components_.empty() && components_.size() <= Condition::kMaxAtoms,
          "FunctionDescriptor: atom count out of range");
  for (const AtomFunction& c : components_)
    require(c.dim() == n, "FunctionDescriptor: component dimension mismatch");
}

CondExtReal FunctionDescriptor::eval(std::span<const double> x) const {
  std::vector<double> out(components_.size());
  for (size_t k = 0; k < components_.size(); ++k) out[k] = components_[k].eval(x);
  return CondExtReal(algebra_size(), std::move(out));
}

CondExtReal FunctionDescriptor::closure_eval(std::span<const double> x) const {
  std::vector<double> out(components_.size());
  for (size_t k = 0; k < components_.size(); ++k) out[k] = components_[k].closure_eval(x);
  return CondExtReal(algebra_size(), std::move(out));
}

bool FunctionDescriptor::convex(std::string* why) const {
  for (size_t k = 0; k < components_.size(); ++k) {
    std::string w;
    if (!components_[k].convex(&w)) {
      if (why) *why = "atom " + std::to_string(k) + ": " + w;
      return false;
    }
  }
  if (why) why->clear();
  return true;
}

bool FunctionDescriptor::proper() const {
  for (const AtomFunction& c : components_)
    if (!c.proper()) return false;
  return true;
}

double FunctionDescriptor::lipschitz_on(const GridSpec& box) const {
  require(box.dims() == n_, "lipschitz_on: dimension mismatch");
  Point lo(n_), hi(n_);
  for (int j = 0; j < n_; ++j) {
    lo[j] = box.axis(j).lo;
    hi[j] = box.axis(j).hi;
  }
  double m = 0.0;
  for (const AtomFunction& c : components_) m = std::max(m, c.lipschitz_on(lo, hi));
  return m;
}

std::vector<std::pair<double, double>> FunctionDescriptor::slope_range_on(
    const GridSpec& box) const {
  Point lo(n_), hi(n_);
  for (int j = 0; j < n_; ++j) {
    lo[j] = box.axis(j).lo;
    hi[j] = box.axis(j).hi;
  }
  std::vector<std::pair<double, double>> acc(n_, {kInf, -kInf});
  for (const AtomFunction& c : components_) {
    auto r = c.slope_range_on(lo, hi);
    for (int j = 0; j < n_; ++j) {
      acc[j].first = std::min(acc[j].first, r[j].first);
      acc[j].second = std::max(acc[j].second, r[j].second);
    }
  }
  return acc;
}

GridFunction sample(const FunctionDescriptor& f, const GridSpec& grid) {
  require(grid.dims() == f.dim(), "sample: dimension mismatch");
  GridFunction out = make_grid_function(grid, f.algebra_size());
  for (size_t node = 0; node < grid.num_nodes(); ++node) {
    Point p = grid.node(node);
    for (int k = 0; k < f.algebra_size(); ++k) out.at(node, k) = f.component(k).eval(p);
  }
  out.claimed_convex = f.convex();
  out.claimed_proper = f.proper();
  return out;
}

GridSpec default_dual_grid(const FunctionDescriptor& f, const GridSpec& primal) {
  auto ranges = f.slope_range_on(primal);
  std::vector<GridAxis> axes;
  for (int j = 0; j < primal.dims(); ++j) {
    double lo = ranges[j].first, hi = ranges[j].second;
    if (!(lo <= hi)) { lo = 0.0; hi = 0.0; }
    double pad = 1.0 + 0.05 * (hi - lo);
    axes.push_back(GridAxis{lo - pad, hi + pad, primal.axis(j).count});
  }
  return GridSpec(std::move(axes));
}

double tol_disc(const FunctionDescriptor& f, const GridSpec& primal) {
  return f.lipschitz_on(primal) * primal.max_spacing() + 1e-9;
}

}  // namespace condual
