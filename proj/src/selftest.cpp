#include "condual/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "condual/boolean_algebra.hpp"
#include "condual/cond_real.hpp"
#include "condual/conditional_metric.hpp"
#include "condual/conjugate.hpp"
#include "condual/function_catalog.hpp"
#include "condual/step_value.hpp"

namespace condual {

namespace {

Condition random_condition(int d, std::mt19937_64& rng) {
  std::uint64_t full = d == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1;
  return Condition::from_mask(d, rng() & full);
}

StepValue<double> random_step(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  std::vector<double> v(d);
  for (double& x : v) x = uni(rng);
  return StepValue<double>(d, std::move(v));
}

Point random_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  Point p(n);
  for (double& x : p) x = uni(rng);
  return p;
}

bool lattice_laws_hold(const Condition& a, const Condition& b, const Condition& c) {
  const int d = a.algebra_size();
  const Condition bot = Condition::bottom(d), top = Condition::top(d);
  bool ok = true;
  ok = ok && meet(a, b) == meet(b, a) && join(a, b) == join(b, a);
  ok = ok && meet(a, meet(b, c)) == meet(meet(a, b), c);
  ok = ok && join(a, join(b, c)) == join(join(a, b), c);
  ok = ok && meet(a, join(a, b)) == a && join(a, meet(a, b)) == a;
  ok = ok && meet(a, join(b, c)) == join(meet(a, b), meet(a, c));
  ok = ok && join(a, meet(b, c)) == meet(join(a, b), join(a, c));
  ok = ok && meet(a, a) == a && join(a, a) == a;
  ok = ok && meet(a, complement_of(a)) == bot && join(a, complement_of(a)) == top;
  ok = ok && complement_of(complement_of(a)) == a;
  ok = ok && complement_of(meet(a, b)) == join(complement_of(a), complement_of(b));
  ok = ok && complement_of(join(a, b)) == meet(complement_of(a), complement_of(b));
  ok = ok && meet(a, top) == a && join(a, bot) == a && meet(a, bot) == bot && join(a, top) == top;
  ok = ok && leq(a, b) == (meet(a, b) == a) && leq(a, b) == (join(a, b) == b);
  return ok;
}

std::string counts(int cases, int violations) {
  std::ostringstream os;
  os << cases << " cases, " << violations << " violations";
  return os.str();
}

}  // namespace

std::vector<CheckResult> selftest_algebra_laws(std::uint64_t seed) {
  std::vector<CheckResult> out;
  {
    const int d = 3, total = 1 << d;
    int violations = 0, cases = 0;
    for (int ma = 0; ma < total; ++ma)
      for (int mb = 0; mb < total; ++mb)
        for (int mc = 0; mc < total; ++mc) {
          ++cases;
          if (!lattice_laws_hold(Condition::from_mask(d, ma), Condition::from_mask(d, mb),
                                 Condition::from_mask(d, mc)))
            ++violations;
        }
    out.push_back({"algebra laws, exhaustive d=3", violations == 0, counts(cases, violations)});
  }
  {
    const int d = 16;
    std::mt19937_64 rng(seed);
    int violations = 0;
    const int cases = 10000;
    for (int t = 0; t < cases; ++t)
      if (!lattice_laws_hold(random_condition(d, rng), random_condition(d, rng),
                             random_condition(d, rng)))
        ++violations;
    out.push_back({"algebra laws, random d=16", violations == 0, counts(cases, violations)});
  }
  return out;
}

std::vector<CheckResult> selftest_stability(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const int cases = 1000;
  std::mt19937_64 rng(seed);

  // Restriction equality carries its condition: distinct conditions never
  // compare equal, and equality sees only atoms inside the condition.
  {
    int violations = 0;
    for (int t = 0; t < cases; ++t) {
      const int d = 2 + static_cast<int>(rng() % 7);
      StepValue<double> x = random_step(d, rng);
      Condition a = random_condition(d, rng), b = random_condition(d, rng);
      if (a != b && restrict_to(x, a) == restrict_to(x, b)) ++violations;
      StepValue<double> y = x;
      Condition off = complement_of(a);
      if (!off.is_bottom()) {
        y.at_atom(off.least_atom()) += 1.0;
        if (!(restrict_to(x, a) == restrict_to(y, a))) ++violations;
      }
      if (!a.is_bottom()) {
        StepValue<double> z = x;
        z.at_atom(a.least_atom()) += 1.0;
        if (restrict_to(x, a) == restrict_to(z, a)) ++violations;
      }
    }
    out.push_back({"restriction equality", violations == 0, counts(cases, violations)});
  }

  // Consistency: agreement on b propagates to every a <= b.
  {
    int violations = 0;
    for (int t = 0; t < cases; ++t) {
      const int d = 2 + static_cast<int>(rng() % 7);
      StepValue<double> x = random_step(d, rng), y = random_step(d, rng);
      Condition b = random_condition(d, rng);
      for (int k : b.atoms()) y.at_atom(k) = x.at_atom(k);
      Condition a = Condition::from_mask(d, rng() & b.mask());
      if (!(restrict_to(x, b) == restrict_to(y, b))) ++violations;
      if (!(restrict_to(x, a) == restrict_to(y, a))) ++violations;
    }
    out.push_back({"restriction consistency", violations == 0, counts(cases, violations)});
  }

  // Unique concatenation: the splice restricts back to each piece, and any
  // single-atom perturbation breaks one of those restrictions.
  {
    int violations = 0;
    for (int t = 0; t < cases; ++t) {
      const int d = 2 + static_cast<int>(rng() % 7);
      std::vector<std::uint64_t> masks(1 + rng() % 3, 0);
      for (int k = 0; k < d; ++k) masks[rng() % masks.size()] |= std::uint64_t{1} << k;
      std::vector<Condition> blocks;
      for (std::uint64_t m : masks) blocks.push_back(Condition::from_mask(d, m));
      Partition p(d, blocks);
      std::vector<StepValue<double>> pieces;
      for (size_t i = 0; i < p.size(); ++i) pieces.push_back(random_step(d, rng));
      StepValue<double> z = concatenate(p, std::span<const StepValue<double>>(pieces));
      for (size_t i = 0; i < p.size(); ++i)
        if (!(restrict_to(z, p.block(i)) == restrict_to(pieces[i], p.block(i)))) ++violations;
      for (int k = 0; k < d; ++k) {
        StepValue<double> zp = z;
        zp.at_atom(k) += 1.0;
        bool still_matches = true;
        for (size_t i = 0; i < p.size(); ++i)
          still_matches =
              still_matches && restrict_to(zp, p.block(i)) == restrict_to(pieces[i], p.block(i));
        if (still_matches) ++violations;
      }
    }
    out.push_back({"unique concatenation", violations == 0, counts(cases, violations)});
  }
  return out;
}

std::vector<CheckResult> selftest_isometry(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const int cases = 1000;
  struct Entry {
    Metric m;
    int n;
    const char* name;
  };
  for (Entry e : {Entry{Metric::euclidean, 3, "euclidean"}, Entry{Metric::l1, 3, "l1"},
                  Entry{Metric::linf, 3, "linf"}, Entry{Metric::arctan, 1, "arctan"}}) {
    int violations = 0;
    for (int t = 0; t < cases; ++t) {
      const int d = 1 + static_cast<int>(rng() % 8);
      std::vector<Point> xs, ys;
      for (int k = 0; k < d; ++k) {
        xs.push_back(random_point(e.n, rng));
        ys.push_back(random_point(e.n, rng));
      }
      StepValue<Point> x(d, xs), y(d, ys);
      if (!(step_metric(embed(x), embed(y), e.m) == step_metric(x, y, e.m))) ++violations;
      if (!(as_step(embed(x)) == x)) ++violations;
    }
    out.push_back({std::string("embedding isometry, ") + e.name, violations == 0,
                   counts(cases, violations)});
  }
  return out;
}

std::vector<CheckResult> selftest_young_fenchel(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const int d = 2;
  std::vector<std::pair<std::string, FunctionDescriptor>> catalog;
  catalog.emplace_back(
      "quadratic",
      FunctionDescriptor(1, std::vector<AtomFunction>(
                                d, AtomFunction(1, QuadraticFn{{1.0}, {0.0}, 0.0}))));
  catalog.emplace_back(
      "abs", FunctionDescriptor(
                 1, std::vector<AtomFunction>(
                        d, AtomFunction(1, ScaledNormFn{1.0, NormKind::euclidean, 0.0}))));
  catalog.emplace_back(
      "indicator", FunctionDescriptor(1, std::vector<AtomFunction>(
                                             d, AtomFunction(1, IndicatorBoxFn{{-1.0}, {1.0}, 0.0}))));
  catalog.emplace_back(
      "max-affine",
      FunctionDescriptor(
          1, std::vector<AtomFunction>(
                 d, AtomFunction(1, MaxAffineFn{{{{-1.0}, 0.0}, {{0.5}, -0.25}, {{2.0}, -2.0}}}))));

  GridSpec primal({GridAxis{-4.0, 4.0, 129}});
  (void)seed;
  for (auto& [name, f] : catalog) {
    GridFunction fg = sample(f, primal);
    GridSpec dual = default_dual_grid(f, primal);
    GridFunction fstar = conjugate_fast(fg, dual);
    double slack = young_fenchel_min_slack(fg, fstar);
    std::ostringstream os;
    os << "min slack " << slack;
    out.push_back({"young-fenchel, " + name, slack >= -1e-12, os.str()});
  }
  return out;
}

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  std::vector<CheckResult> all;
  for (auto* suite : {&selftest_algebra_laws, &selftest_stability, &selftest_isometry,
                      &selftest_young_fenchel}) {
    std::vector<CheckResult> part = (*suite)(seed);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

bool all_pass(std::span<const CheckResult> results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace condual
