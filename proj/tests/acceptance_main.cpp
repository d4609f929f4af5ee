// Acceptance harness: one timed [PASS]/[FAIL] line per criterion, nonzero
// exit if any criterion fails. Tolerances are pinned here, not configurable.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "condual/bochner.hpp"
#include "condual/conjugate.hpp"
#include "condual/dual_pair.hpp"
#include "condual/lsc.hpp"
#include "condual/selftest.hpp"

using namespace condual;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- utilities

double now_seconds() {
  using clk = std::chrono::steady_clock;
  static const clk::time_point t0 = clk::now();
  return std::chrono::duration<double>(clk::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (detail.empty()) detail = why;
  }
  void note(const std::string& what) {
    if (pass && detail.empty()) detail = what;
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ------------------------------------------------------ shared catalog runs

// One catalog function with a closed-form conjugate, its pinned grids, a
// sampler for admissible test points, and the exact conjugate value.
struct CatalogCase {
  std::string name;
  FunctionDescriptor desc;
  GridSpec primal;
  GridSpec dual;
  // Closed-form conjugate per atom; +inf where the true conjugate is +inf.
  std::function<double(const Point&, int)> conj_exact;
  // Uniform sampler of test points where every atom is finite.
  std::function<Point(std::mt19937_64&)> sample_point;
  // Distinguished dual points whose exact conjugate values build the
  // dominated-extension candidate (slopes of the affine minorants).
  std::vector<Point> dual_support;
};

struct CatalogRun {
  GridFunction fs;     // f sampled on the primal grid
  GridFunction fstar;  // grid conjugate
  GridFunction fss;    // grid biconjugate on the primal grid
  DualityReport duality;
  double tol = 0.0;    // discretization tolerance for this case
};

// Criterion 5 needs a timed case; conjugate results are kept by value, so
// the struct above stays aggregate-constructible (GridFunction has no
// default constructor).

std::vector<CatalogCase> build_catalog() {
  std::vector<CatalogCase> cases;

  {  // 0.5 * alpha * x^2 per atom; conjugate y^2 / (2 alpha). The dual grid
     // covers the full subgradient range [-16, 16] so f** = f on the box;
     // the closed form is compared where its maximizer y / alpha lies inside
     // the primal window (beyond it the window cannot realize the value).
    std::vector<double> alphas{1.0, 1.5, 2.0, 4.0};
    std::vector<AtomFunction> atoms;
    for (double a : alphas) atoms.push_back(AtomFunction(1, QuadraticFn{{a}, {0.0}, 0.0}));
    CatalogCase c{"quadratic",
                  FunctionDescriptor(1, std::move(atoms)),
                  GridSpec({{-4.0, 4.0, 257}}),
                  GridSpec({{-16.0, 16.0, 257}}),
                  [alphas](const Point& y, int k) {
                    if (std::fabs(y[0]) > 4.0 * alphas[k]) return kInf;
                    return y[0] * y[0] / (2.0 * alphas[k]);
                  },
                  [](std::mt19937_64& rng) {
                    return Point{std::uniform_real_distribution<double>(-1.0, 1.0)(rng)};
                  },
                  {}};
    for (int i = 0; i <= 40; ++i) c.dual_support.push_back(Point{-4.0 + i * 0.2});
    cases.push_back(std::move(c));
  }

  {  // alpha * |x| per atom; conjugate = indicator of [-alpha, alpha].
    std::vector<double> alphas{0.5, 1.0, 1.5, 2.0};
    std::vector<AtomFunction> atoms;
    for (double a : alphas)
      atoms.push_back(AtomFunction(1, ScaledNormFn{a, NormKind::euclidean, 0.0}));
    CatalogCase c{"abs",
                  FunctionDescriptor(1, std::move(atoms)),
                  GridSpec({{-4.0, 4.0, 257}}),
                  GridSpec({{-2.0, 2.0, 257}}),
                  [alphas](const Point& y, int k) {
                    return std::fabs(y[0]) <= alphas[k] ? 0.0 : kInf;
                  },
                  [](std::mt19937_64& rng) {
                    return Point{std::uniform_real_distribution<double>(-3.0, 3.0)(rng)};
                  },
                  {}};
    for (double s : {-0.5, -0.25, 0.0, 0.25, 0.5}) c.dual_support.push_back(Point{s});
    cases.push_back(std::move(c));
  }

  {  // indicator of [-a, a] per atom; conjugate a * |y|.
    std::vector<double> as{0.5, 1.0, 1.5, 2.0};
    std::vector<AtomFunction> atoms;
    for (double a : as)
      atoms.push_back(AtomFunction(1, IndicatorBoxFn{{-a}, {a}, 0.0}));
    CatalogCase c{"indicator",
                  FunctionDescriptor(1, std::move(atoms)),
                  GridSpec({{-4.0, 4.0, 257}}),
                  GridSpec({{-2.0, 2.0, 257}}),
                  [as](const Point& y, int k) { return as[k] * std::fabs(y[0]); },
                  [](std::mt19937_64& rng) {
                    // Inside the smallest box so every atom is finite.
                    return Point{std::uniform_real_distribution<double>(-0.5, 0.5)(rng)};
                  },
                  {}};
    for (int i = 0; i <= 20; ++i) c.dual_support.push_back(Point{-2.0 + i * 0.2});
    cases.push_back(std::move(c));
  }

  {  // max of affine planes, identical atoms; conjugate(a_j) = -b_j.
    MaxAffineFn ma{{{{-1.0}, 0.0}, {{0.5}, -0.25}, {{2.0}, -2.0}}};
    std::vector<AtomFunction> atoms(4, AtomFunction(1, ma));
    CatalogCase c{"max-affine",
                  FunctionDescriptor(1, std::move(atoms)),
                  GridSpec({{-4.0, 4.0, 257}}),
                  GridSpec({{-4.0, 4.0, 257}}),
                  [ma](const Point& y, int) -> double {
                    for (const auto& pl : ma.planes)
                      if (y[0] == pl.a[0]) return -pl.b;
                    return kInf;  // compared only on the support slopes
                  },
                  [](std::mt19937_64& rng) {
                    return Point{std::uniform_real_distribution<double>(-2.0, 2.0)(rng)};
                  },
                  {Point{-1.0}, Point{0.5}, Point{2.0}}};
    cases.push_back(std::move(c));
  }

  {  // n = 2 quadratic forms 0.5 x'Qx, Q > 0, distinct per atom;
     // conjugate 0.5 y'Q^{-1}y. Row sums of Q^{-1} stay <= 1 so the
     // conjugate's maximizer lies inside the primal box for every dual node.
    std::vector<std::vector<double>> qs{{2.0, 0.5, 0.5, 1.5},
                                        {1.0, 0.0, 0.0, 2.0},
                                        {3.0, 1.0, 1.0, 2.0},
                                        {1.25, -0.25, -0.25, 1.25}};
    std::vector<AtomFunction> atoms;
    for (const auto& q : qs) atoms.push_back(AtomFunction(2, QuadraticFn{q, {0.0, 0.0}, 0.0}));
    auto inv2 = [](const std::vector<double>& q) {
      double det = q[0] * q[3] - q[1] * q[2];
      return std::vector<double>{q[3] / det, -q[1] / det, -q[2] / det, q[0] / det};
    };
    std::vector<std::vector<double>> invs;
    for (const auto& q : qs) invs.push_back(inv2(q));
    CatalogCase c{"quadratic2d",
                  FunctionDescriptor(2, std::move(atoms)),
                  GridSpec({{-3.0, 3.0, 65}, {-3.0, 3.0, 65}}),
                  // Covers the subgradient range of every atom over the box
                  // (Q3 reaches (12, 9) at the corner), so f** = f there.
                  GridSpec({{-12.0, 12.0, 97}, {-12.0, 12.0, 97}}),
                  [invs](const Point& y, int k) {
                    const auto& m = invs[k];
                    double x0 = m[0] * y[0] + m[1] * y[1];
                    double x1 = m[2] * y[0] + m[3] * y[1];
                    // The closed form is realized only while its maximizer
                    // Q^{-1} y stays inside the primal window.
                    if (std::fabs(x0) > 3.0 || std::fabs(x1) > 3.0) return kInf;
                    return 0.5 * (y[0] * x0 + y[1] * x1);
                  },
                  [](std::mt19937_64& rng) {
                    std::uniform_real_distribution<double> u(-0.75, 0.75);
                    return Point{u(rng), u(rng)};
                  },
                  {}};
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j) c.dual_support.push_back(Point{0.75 * i, 0.75 * j});
    cases.push_back(std::move(c));
  }

  return cases;
}

const std::vector<CatalogCase>& catalog() {
  static const std::vector<CatalogCase> c = build_catalog();
  return c;
}

// Criterion 6 computes the runs; 7 and 8 reuse them.
std::optional<std::vector<CatalogRun>> g_runs;

const std::vector<CatalogRun>& catalog_runs() {
  if (!g_runs) {
    std::vector<CatalogRun> runs;
    std::mt19937_64 rng(20240601);
    for (const CatalogCase& c : catalog()) {
      GridFunction fs = sample(c.desc, c.primal);
      GridFunction fstar = conjugate_fast(fs, c.dual);
      GridFunction fss = conjugate_fast(fstar, c.primal);
      std::vector<Point> pts;
      for (int i = 0; i < 100; ++i) pts.push_back(c.sample_point(rng));
      DualityReport rep = check_duality(c.desc, pts, c.primal, c.dual, 0.0, ConjMethod::fast);
      double tol = tol_disc(c.desc, c.primal);
      runs.push_back(CatalogRun{std::move(fs), std::move(fstar), std::move(fss),
                                std::move(rep), tol});
    }
    g_runs = std::move(runs);
  }
  return *g_runs;
}

// -------------------------------------------------------------- criteria

Outcome criterion_algebra_laws() {
  Outcome out;
  double t0 = now_seconds();
  for (const CheckResult& r : selftest_algebra_laws(1))
    if (!r.pass) out.fail(r.name + ": " + r.detail);
  double dt = now_seconds() - t0;
  if (dt >= 5.0) out.fail("runtime " + std::to_string(dt) + " s exceeds 5 s");
  out.note("exhaustive d=3 (512 triples) and 10000 random d=16 triples, zero violations");
  return out;
}

Outcome criterion_stability() {
  Outcome out;
  for (const CheckResult& r : selftest_stability(1))
    if (!r.pass) out.fail(r.name + ": " + r.detail);
  out.note("restriction equality, consistency, unique concatenation: 1000 cases each, d <= 8");
  return out;
}

Outcome criterion_isometry() {
  Outcome out;
  for (const CheckResult& r : selftest_isometry(1))
    if (!r.pass) out.fail(r.name + ": " + r.detail);
  out.note("bitwise isometry on 1000 pairs per metric, round-trip surjectivity");
  return out;
}

Outcome criterion_pairing() {
  Outcome out;
  double t0 = now_seconds();
  DualPairConfig cfg = make_dual_pair(3);
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uni(-2, 2);
  auto draw = [&](int n, int d) {
    std::vector<double> v(static_cast<size_t>(n) * d);
    for (double& a : v) a = uni(rng);
    return CondVector(n, d, std::move(v));
  };

  for (int t = 0; t < 1000; ++t) {  // bilinearity within 1e-12 atomwise
    int d = 1 + static_cast<int>(rng() % 6);
    CondVector x = draw(3, d), xp = draw(3, d), y = draw(3, d);
    double a = uni(rng), b = uni(rng);
    CondExtReal lhs = pairing_c(cfg, cv_add(cv_scale(a, x), cv_scale(b, xp)), y);
    CondExtReal rhs = add(scale(a, pairing_c(cfg, x, y)), scale(b, pairing_c(cfg, xp, y)));
    for (int k = 0; k < d; ++k)
      if (std::fabs(lhs[k] - rhs[k]) > 1e-12) out.fail("bilinearity residual above 1e-12");
  }

  for (int t = 0; t < 1000; ++t) {  // Cauchy-Schwarz bound atomwise
    int d = 1 + static_cast<int>(rng() % 6);
    CondVector x = draw(3, d), y = draw(3, d);
    CondExtReal p = pairing_c(cfg, x, y);
    CondExtReal nx = cv_norm(x), ny = cv_norm(y);
    for (int k = 0; k < d; ++k)
      if (std::fabs(p[k]) > nx[k] * ny[k] + 1e-12) out.fail("pairing bound violated");
  }

  // Separation: sampled ball minimum pairing >= margin - 1e-12.
  DualPairConfig cfg2 = make_dual_pair(2);
  std::uniform_real_distribution<double> mag(1, 4);
  std::uniform_real_distribution<double> rad(0.1, 1.0);
  std::uniform_real_distribution<double> unit(-1, 1);
  for (int t = 0; t < 200; ++t) {
    int d = 1 + static_cast<int>(rng() % 4);
    std::vector<double> v(static_cast<size_t>(2) * d);
    for (double& a : v) a = mag(rng) * (unit(rng) < 0 ? -1 : 1);
    CondVector x(2, d, std::move(v));
    std::vector<double> rr(d);
    for (double& r : rr) r = rad(rng);
    CondExtReal radius(d, rr);
    Separation s = separate(cfg2, x, radius);
    int per_atom = 10000 / d;
    for (int k = 0; k < d; ++k) {
      Point xk = x.atom_point(k), yk = s.direction.atom_point(k);
      for (int j = 0; j < per_atom; ++j) {
        Point dir{unit(rng), unit(rng)};
        double nd = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1]);
        Point z = xk;
        if (nd > 0) {
          double len = 0.5 * rr[k] * std::fabs(unit(rng)) / nd;
          z[0] += dir[0] * len;
          z[1] += dir[1] * len;
        }
        double got = base_pairing(cfg2, std::span<const double>(z.data(), 2),
                                  std::span<const double>(yk.data(), 2));
        if (got < s.margin[k] - 1e-12) out.fail("separation margin violated in the ball");
      }
    }
  }
  double dt = now_seconds() - t0;
  if (dt >= 10.0) out.fail("runtime " + std::to_string(dt) + " s exceeds 10 s");
  out.note("bilinearity and norm bound: 1000 cases each; separation: 200 x 10000 ball samples");
  return out;
}

Outcome criterion_conjugation_oracle() {
  Outcome out;
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> uni(-4, 4);

  auto random_convex_pl = [&](const GridSpec& g, int d) {
    GridFunction f = make_grid_function(g, d);
    for (int k = 0; k < d; ++k) {
      std::vector<double> slopes(g.num_nodes() - 1);
      for (double& s : slopes) s = uni(rng);
      std::sort(slopes.begin(), slopes.end());
      f.at(0, k) = uni(rng);
      for (size_t i = 1; i < g.num_nodes(); ++i)
        f.at(i, k) = f.at(i - 1, k) + slopes[i - 1] * g.spacing(0);
    }
    return f;
  };

  double worst = 0.0;
  {
    GridSpec primal({{-2.0, 2.0, 257}});
    GridSpec dual({{-3.0, 3.0, 257}});
    for (int t = 0; t < 200; ++t) {
      GridFunction f = random_convex_pl(primal, 4);
      GridFunction a = conjugate_brute(f, dual), b = conjugate_fast(f, dual);
      for (size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::fabs(a.values[i] - b.values[i]));
    }
  }
  {
    GridSpec p1({{-2.0, 2.0, 33}});
    GridSpec p2({{-2.0, 2.0, 33}, {-2.0, 2.0, 33}});
    GridSpec d2({{-3.0, 3.0, 33}, {-3.0, 3.0, 33}});
    for (int t = 0; t < 20; ++t) {
      GridFunction g1 = random_convex_pl(p1, 1), g2 = random_convex_pl(p1, 1);
      GridFunction f = make_grid_function(p2, 1);
      for (size_t i = 0; i < p2.num_nodes(); ++i) {
        int multi[2];
        p2.unflatten(i, std::span<int>(multi, 2));
        f.at(i, 0) = g1.at(static_cast<size_t>(multi[0]), 0) +
                     g2.at(static_cast<size_t>(multi[1]), 0);
      }
      GridFunction a = conjugate_brute(f, d2), b = conjugate_fast(f, d2);
      for (size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::fabs(a.values[i] - b.values[i]));
    }
  }
  if (worst > 1e-9) out.fail("fast/brute difference " + std::to_string(worst));

  // Speed: fast at least 10x faster than brute at N = M = 2049.
  GridSpec big_p({{-2.0, 2.0, 2049}});
  GridSpec big_d({{-3.0, 3.0, 2049}});
  GridFunction big = random_convex_pl(big_p, 4);
  double t0 = now_seconds();
  GridFunction rb = conjugate_brute(big, big_d);
  double brute_time = now_seconds() - t0;
  double fast_time = kInf;
  GridFunction rf = rb;
  for (int rep = 0; rep < 3; ++rep) {
    double t1 = now_seconds();
    rf = conjugate_fast(big, big_d);
    fast_time = std::min(fast_time, now_seconds() - t1);
  }
  for (size_t i = 0; i < rb.values.size(); ++i)
    if (std::fabs(rb.values[i] - rf.values[i]) > 1e-9) out.fail("fast/brute mismatch at 2049");
  if (brute_time < 10.0 * fast_time)
    out.fail("fast only " + std::to_string(brute_time / fast_time) + "x faster at N=M=2049");
  std::ostringstream note;
  note << "max |fast-brute| = " << worst << " over 220 cases; speedup at 2049: "
       << (brute_time / fast_time) << "x";
  out.note(note.str());
  return out;
}

Outcome criterion_fenchel_moreau() {
  Outcome out;
  double t0 = now_seconds();
  const auto& cs = catalog();
  const auto& runs = catalog_runs();
  for (size_t i = 0; i < cs.size(); ++i) {
    const CatalogCase& c = cs[i];
    const CatalogRun& r = runs[i];

    // Grid conjugate against the closed form, where the closed form is finite.
    for (size_t j = 0; j < c.dual.num_nodes(); ++j) {
      Point y = c.dual.node(j);
      for (int k = 0; k < c.desc.algebra_size(); ++k) {
        double want = c.conj_exact(y, k);
        if (want == kInf) continue;
        if (std::fabs(r.fstar.at(j, k) - want) > r.tol)
          out.fail(c.name + ": conjugate deviates from the closed form");
      }
    }

    // Biconjugation residual on finite primal nodes.
    for (size_t j = 0; j < c.primal.num_nodes(); ++j)
      for (int k = 0; k < c.desc.algebra_size(); ++k) {
        double fv = r.fs.at(j, k);
        if (fv == kInf) continue;
        if (std::fabs(fv - r.fss.at(j, k)) > r.tol)
          out.fail(c.name + ": |f - f**| above tol_disc at a primal node");
      }

    // Pointwise duality at 100 test points.
    if (!r.duality.pass || r.duality.negative_residual_bug)
      out.fail(c.name + ": check_duality failed (max residual " +
               std::to_string(r.duality.max_residual) + ")");
  }
  double dt = now_seconds() - t0;
  if (dt >= 60.0) out.fail("runtime " + std::to_string(dt) + " s exceeds 60 s");
  out.note("5 catalog families (d = 4), closed-form conjugates, biconjugation, 100-point duality");
  return out;
}

Outcome criterion_young_fenchel() {
  Outcome out;
  double worst = kInf;
  const auto& runs = catalog_runs();
  for (const CatalogRun& r : runs)
    worst = std::min(worst, young_fenchel_min_slack(r.fs, r.fstar));
  if (worst < -1e-12) out.fail("min slack " + std::to_string(worst));
  std::ostringstream note;
  note << "min slack over all (x, y, atom) triples of the catalog runs: " << worst;
  out.note(note.str());
  return out;
}

Outcome criterion_lsc() {
  Outcome out;

  // The non-lsc example: 0 away from 0, 1 at 0.
  FunctionDescriptor raised(
      1, {AtomFunction(1, QuadraticFn{{0.0}, {0.0}, 0.0}, {PointOverride{{0.0}, 1.0}})});
  VectorFunction f{raised, GridSpec({{-4.0, 4.0, 2}})};
  for (NeighborhoodKind kind : {NeighborhoodKind::weak_basis, NeighborhoodKind::norm_ball}) {
    LscAtResult r = is_lsc_at(f, Point{0.0}, default_schedule(), kind);
    if (r.lsc) out.fail("non-lsc example passed is_lsc_at");
    if (!(r.gap == CondExtReal(1, {1.0}))) out.fail("non-lsc example gap is not exactly 1");
  }
  GridSpec primal({{-4.0, 4.0, 257}});
  GridSpec dual({{-4.0, 4.0, 257}});
  std::vector<Point> at0{{0.0}};
  DualityReport rep = check_duality(raised, at0, primal, dual);
  double tol = tol_disc(raised, primal);
  if (rep.pass) out.fail("non-lsc example passed check_duality");
  if (std::fabs(rep.max_residual - 1.0) > tol)
    out.fail("non-lsc duality residual is not 1 within tol_disc");

  // Every catalog function passes both characterizations, and the weak and
  // norm-ball verdicts agree.
  const auto& cs = catalog();
  const auto& runs = catalog_runs();
  std::mt19937_64 rng(401);
  for (size_t i = 0; i < cs.size(); ++i) {
    if (!runs[i].duality.pass) out.fail(cs[i].name + ": catalog check_duality failed");
    VectorFunction vf{cs[i].desc, cs[i].primal};
    std::vector<Point> probes;
    probes.push_back(Point(static_cast<size_t>(cs[i].desc.dim()), 0.0));
    for (int t = 0; t < 5; ++t) probes.push_back(cs[i].sample_point(rng));
    for (const Point& x : probes) {
      LscAtResult w = is_lsc_at(vf, x, default_schedule(), NeighborhoodKind::weak_basis);
      LscAtResult b = is_lsc_at(vf, x, default_schedule(), NeighborhoodKind::norm_ball);
      if (!w.lsc) out.fail(cs[i].name + ": weak-neighborhood lsc check failed");
      if (!b.lsc) out.fail(cs[i].name + ": norm-ball lsc check failed");
      if (w.lsc != b.lsc) out.fail(cs[i].name + ": weak and ball verdicts disagree");
    }
  }
  out.note("gap exactly 1 and duality residual 1 on the raised point; catalog passes, verdicts agree");
  return out;
}

Outcome criterion_extension() {
  Outcome out;
  std::mt19937_64 rng(501);
  std::uniform_real_distribution<double> lam(0, 1);
  const auto& cs = catalog();
  const auto& runs = catalog_runs();
  for (size_t i = 0; i < cs.size(); ++i) {
    const CatalogCase& c = cs[i];
    VectorFunction vf{c.desc, c.primal};
    const int d = c.desc.algebra_size(), n = c.desc.dim();

    // Agreement with f at 100 constant conditional points.
    for (int t = 0; t < 100; ++t) {
      Point x = c.sample_point(rng);
      CondExtReal ext = cond_extend(vf, CondVector::constant(d, x));
      CondExtReal direct = c.desc.eval(x);
      for (int k = 0; k < d; ++k) {
        double diff = std::fabs(ext[k] - direct[k]);
        if (!(diff <= runs[i].tol || (ext[k] == direct[k])))
          out.fail(c.name + ": extension deviates from f at a constant point");
      }
    }

    // Conditional convexity at 1000 sampled (lambda, x, x') triples.
    auto draw_cond = [&] {
      std::vector<Point> pts;
      for (int k = 0; k < d; ++k) pts.push_back(c.sample_point(rng));
      return CondVector(n, pts);
    };
    for (int t = 0; t < 1000; ++t) {
      CondVector x = draw_cond(), y = draw_cond();
      double l = lam(rng);
      CondExtReal fm = cond_extend(vf, cv_add(cv_scale(l, x), cv_scale(1 - l, y)));
      CondExtReal fx = cond_extend(vf, x), fy = cond_extend(vf, y);
      for (int k = 0; k < d; ++k) {
        double bound = l * fx[k] + (1 - l) * fy[k];
        if (fm[k] > bound + 1e-9) out.fail(c.name + ": conditional convexity violated");
      }
    }

    // The dominated-extension candidate built from exact affine minorants:
    // g(x)_k = max over the support slopes y of <x, y> - f*_exact(y) <= f_c.
    for (int t = 0; t < 200; ++t) {
      CondVector x = draw_cond();
      CondExtReal fc = cond_extend(vf, x);
      for (int k = 0; k < d; ++k) {
        double g = -kInf;
        Point xk = x.atom_point(k);
        for (const Point& y : c.dual_support) {
          double fstar = c.conj_exact(y, k);
          if (fstar == kInf) continue;
          double ip = 0.0;
          for (int j = 0; j < n; ++j) ip += xk[j] * y[j];
          g = std::max(g, ip - fstar);
        }
        if (g > fc[k] + 1e-9) out.fail(c.name + ": dominated candidate exceeds the extension");
      }
    }
  }
  out.note("agreement at constant points, 1000 convexity triples, dominated candidate below f_c");
  return out;
}

Outcome criterion_bochner() {
  Outcome out;
  FiniteMeasureSpace sp =
      make_measure_space({"w1", "w2", "w3", "w4", "w5"}, {0.4, 0.3, 0.0, 0.2, 0.1});
  auto [d, map] = measure_algebra(sp);
  if (d != 4) out.fail("expected a 4-atom algebra from the 5-point space");
  if (!map.is_null(2)) out.fail("expected point 3 to be null");

  DualPairConfig pair = make_dual_pair(2);
  std::mt19937_64 rng(601);
  std::uniform_real_distribution<double> uni(-6, 6);
  auto draw = [&] {
    std::vector<Point> raw(5);
    for (Point& p : raw) p = Point{uni(rng), uni(rng)};
    return L0Element(sp, std::move(raw));
  };
  for (int t = 0; t < 1000; ++t) {
    L0Element x = draw(), y = draw();
    double a = uni(rng);
    if (!(iso_to_cond(l0_add(x, y)) == cv_add(iso_to_cond(x), iso_to_cond(y))))
      out.fail("addition square broke");
    if (!(iso_to_cond(l0_scale(a, x)) == cv_scale(a, iso_to_cond(x))))
      out.fail("scaling square broke");
    CondVector nl = iso_to_cond(l0_norm(x));
    CondExtReal nc = cv_norm(iso_to_cond(x));
    CondVector pl = iso_to_cond(l0_pairing(x, y));
    CondExtReal pc = pairing_c(pair, iso_to_cond(x), iso_to_cond(y));
    for (int k = 0; k < 4; ++k) {
      if (nl.atom_point(k)[0] != nc[k]) out.fail("norm square broke");
      if (pl.atom_point(k)[0] != pc[k]) out.fail("pairing square broke");
    }

    // ess_sup of a random scalar family commutes with the identification.
    int m = 1 + static_cast<int>(rng() % 4);
    std::vector<L0Element> fam;
    std::vector<CondExtReal> canon;
    for (int q = 0; q < m; ++q) {
      std::vector<Point> raw(5);
      for (Point& p : raw) p = Point{uni(rng)};
      fam.push_back(L0Element(sp, std::move(raw)));
      std::vector<double> vals(4);
      for (int k = 0; k < 4; ++k) vals[k] = fam.back().canonical().atom_point(k)[0];
      canon.push_back(CondExtReal(4, std::move(vals)));
    }
    L0Element sup = ess_sup_l0(fam);
    CondExtReal want = ess_sup(canon);
    for (int k = 0; k < 4; ++k)
      if (sup.canonical().atom_point(k)[0] != want[k]) out.fail("ess_sup square broke");

    // Null-point insensitivity: rewriting the null value changes nothing.
    std::vector<Point> raw = x.raw();
    raw[2] = Point{uni(rng), uni(rng)};
    L0Element xp(sp, std::move(raw));
    if (!(xp == x)) out.fail("null-point rewrite broke a.e. identity");
    if (!(iso_to_cond(xp) == iso_to_cond(x))) out.fail("null-point rewrite leaked");
    if (!(l0_norm(xp) == l0_norm(x))) out.fail("null-point rewrite leaked through norm");
  }
  out.note("1000 cases over a 5-point space with one null point, all squares bitwise");
  return out;
}

struct CliRun {
  std::string label;
  std::string args;       // after the executable path
  int expected_exit = 0;
};

Outcome criterion_cli() {
  Outcome out;
  const std::string cli = CONDUAL_CLI_PATH;
  const std::string problems = CONDUAL_PROBLEMS_DIR;
  const std::string data = CONDUAL_DATA_DIR;
  const fs::path work = fs::path("/tmp") / "condual_acceptance";
  std::error_code ec;
  fs::remove_all(work, ec);
  fs::create_directories(work);

  std::vector<CliRun> runs{
      {"selftest", "selftest", 0},
      {"conjugate_quadratic", "conjugate --problem " + problems + "/quadratic.json --oracle", 0},
      {"duality_abs", "check-duality --problem " + problems + "/abs_indicator.json", 0},
      {"conjugate_2d", "conjugate --problem " + problems + "/quadratic2d.json", 0},
      {"extend", "extend --problem " + problems + "/extend_catalog.json", 0},
      {"lsc_fail", "check-lsc --problem " + problems + "/nonlsc_point.json", 1},
      {"schema", "conjugate --problem " + data + "/bad_schema.json", 2},
      {"improper", "conjugate --problem " + data + "/improper.json", 3},
  };

  for (const CliRun& r : runs) {
    fs::path dir = work / r.label;
    fs::create_directories(dir);
    auto invoke = [&](const std::string& stdout_file) {
      std::string cmd = cli + " " + r.args + " --out " + dir.string() + " > " +
                        (work / stdout_file).string() + " 2> /dev/null";
      int rc = std::system(cmd.c_str());
      return rc == -1 ? -1 : WEXITSTATUS(rc);
    };

    int code1 = invoke(r.label + "_1.out");
    if (code1 != r.expected_exit) {
      out.fail(r.label + ": exit " + std::to_string(code1) + ", expected " +
               std::to_string(r.expected_exit));
      continue;
    }
    // Stash the first run's artifacts, rerun into the same directory, compare.
    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(dir))
      first[e.path().filename().string()] = read_file(e.path());
    int code2 = invoke(r.label + "_2.out");
    if (code2 != r.expected_exit) out.fail(r.label + ": rerun exit code changed");
    std::map<std::string, std::string> second;
    for (const auto& e : fs::directory_iterator(dir))
      second[e.path().filename().string()] = read_file(e.path());
    if (first != second) out.fail(r.label + ": rerun artifacts are not byte-identical");
    if (read_file(work / (r.label + "_1.out")) != read_file(work / (r.label + "_2.out")))
      out.fail(r.label + ": rerun stdout differs");
    if (r.expected_exit <= 1 && first.empty()) out.fail(r.label + ": no report written");
  }
  out.note("8 invocations, exit codes 0/1/2/3 as specified, byte-identical reruns");
  return out;
}

}  // namespace

int main() {
  struct Row {
    const char* name;
    Outcome (*run)();
  };
  const Row rows[] = {
      {"boolean algebra laws", criterion_algebra_laws},
      {"conditional-set axioms", criterion_stability},
      {"isometric embedding", criterion_isometry},
      {"dual pairing and separation", criterion_pairing},
      {"conjugation oracle equivalence", criterion_conjugation_oracle},
      {"fenchel-moreau at desk scale", criterion_fenchel_moreau},
      {"young-fenchel inequality", criterion_young_fenchel},
      {"lsc characterization", criterion_lsc},
      {"maximal conditional extension", criterion_extension},
      {"bochner identification", criterion_bochner},
      {"cli determinism and exit codes", criterion_cli},
  };

  int failures = 0;
  int idx = 0;
  for (const Row& row : rows) {
    ++idx;
    double t0 = now_seconds();
    Outcome o;
    try {
      o = row.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double dt = now_seconds() - t0;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f", dt);
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << idx << ": " << row.name
              << " (" << timing << " s)" << (o.detail.empty() ? "" : " - " + o.detail)
              << "\n";
    if (!o.pass) ++failures;
  }
  if (failures) std::cout << failures << " criterion(s) failed\n";
  else std::cout << "all 11 criteria passed\n";
  return failures == 0 ? 0 : 1;
}
