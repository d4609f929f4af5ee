#include "condual/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace condual {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw schema_error(where + ": " + what);
}

void expect_object(const Json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
}

// Unknown keys are rejected everywhere: a typo must not silently fall back
// to a default.
void expect_keys(const Json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  expect_object(obj, where);
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) fail(where, "unknown key \"" + item.key() + "\"");
  }
}

const Json* find(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const Json& need(const Json& obj, const char* key, const std::string& where) {
  const Json* v = find(obj, key);
  if (!v) fail(where, std::string("missing key \"") + key + "\"");
  return *v;
}

int json_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

double json_number(const Json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  double x = v.get<double>();
  if (std::isnan(x)) fail(where, "NaN is not a value");
  return x;
}

std::string json_string(const Json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

std::uint64_t json_seed(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer seed");
  if (!v.is_number_unsigned() && v.get<long long>() < 0) fail(where, "seed must be nonnegative");
  return v.get<std::uint64_t>();
}

std::vector<double> json_vector(const Json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(json_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> json_extended_vector(const Json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(json_extended(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

NormKind parse_norm(const Json& v, const std::string& where) {
  std::string s = json_string(v, where);
  if (s == "euclidean") return NormKind::euclidean;
  if (s == "l1") return NormKind::l1;
  if (s == "linf") return NormKind::linf;
  fail(where, "unknown norm \"" + s + "\" (euclidean, l1, linf)");
}

GridSpec parse_grid(const Json& j, const std::string& where) {
  expect_keys(j, where, {"axes"});
  const Json& axes = need(j, "axes", where);
  if (!axes.is_array() || axes.empty()) fail(where + ".axes", "expected a nonempty array");
  std::vector<GridAxis> out;
  for (size_t i = 0; i < axes.size(); ++i) {
    std::string aw = where + ".axes[" + std::to_string(i) + "]";
    expect_keys(axes[i], aw, {"lo", "hi", "count"});
    GridAxis a;
    a.lo = json_number(need(axes[i], "lo", aw), aw + ".lo");
    a.hi = json_number(need(axes[i], "hi", aw), aw + ".hi");
    a.count = json_int(need(axes[i], "count", aw), aw + ".count");
    out.push_back(a);
  }
  try {
    return GridSpec(std::move(out));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

AtomFunction parse_component(const Json& j, int n, const std::string& where) {
  expect_object(j, where);
  std::string kind = json_string(need(j, "kind", where), where + ".kind");
  std::vector<PointOverride> overrides;
  if (const Json* ov = find(j, "overrides")) {
    if (!ov->is_array()) fail(where + ".overrides", "expected an array");
    for (size_t i = 0; i < ov->size(); ++i) {
      std::string ow = where + ".overrides[" + std::to_string(i) + "]";
      expect_keys((*ov)[i], ow, {"at", "value"});
      overrides.push_back(PointOverride{json_vector(need((*ov)[i], "at", ow), ow + ".at"),
                                        json_extended(need((*ov)[i], "value", ow), ow + ".value")});
    }
  }
  try {
    if (kind == "quadratic") {
      expect_keys(j, where, {"kind", "q", "b", "c", "overrides"});
      QuadraticFn fn;
      fn.q = json_vector(need(j, "q", where), where + ".q");
      fn.b = find(j, "b") ? json_vector(*find(j, "b"), where + ".b") : Point(n, 0.0);
      fn.c = find(j, "c") ? json_number(*find(j, "c"), where + ".c") : 0.0;
      return AtomFunction(n, std::move(fn), std::move(overrides));
    }
    if (kind == "norm") {
      expect_keys(j, where, {"kind", "alpha", "p", "offset", "overrides"});
      ScaledNormFn fn;
      fn.alpha = find(j, "alpha") ? json_number(*find(j, "alpha"), where + ".alpha") : 1.0;
      fn.p = find(j, "p") ? parse_norm(*find(j, "p"), where + ".p") : NormKind::euclidean;
      fn.offset = find(j, "offset") ? json_number(*find(j, "offset"), where + ".offset") : 0.0;
      return AtomFunction(n, std::move(fn), std::move(overrides));
    }
    if (kind == "indicator_box") {
      expect_keys(j, where, {"kind", "lo", "hi", "offset", "overrides"});
      IndicatorBoxFn fn;
      fn.lo = json_vector(need(j, "lo", where), where + ".lo");
      fn.hi = json_vector(need(j, "hi", where), where + ".hi");
      fn.offset = find(j, "offset") ? json_number(*find(j, "offset"), where + ".offset") : 0.0;
      return AtomFunction(n, std::move(fn), std::move(overrides));
    }
    if (kind == "max_affine") {
      expect_keys(j, where, {"kind", "planes", "overrides"});
      const Json& planes = need(j, "planes", where);
      if (!planes.is_array() || planes.empty())
        fail(where + ".planes", "expected a nonempty array");
      MaxAffineFn fn;
      for (size_t i = 0; i < planes.size(); ++i) {
        std::string pw = where + ".planes[" + std::to_string(i) + "]";
        expect_keys(planes[i], pw, {"a", "b"});
        MaxAffineFn::Plane pl;
        pl.a = json_vector(need(planes[i], "a", pw), pw + ".a");
        pl.b = find(planes[i], "b") ? json_number(*find(planes[i], "b"), pw + ".b") : 0.0;
        fn.planes.push_back(std::move(pl));
      }
      return AtomFunction(n, std::move(fn), std::move(overrides));
    }
    if (kind == "piecewise_affine") {
      expect_keys(j, where, {"kind", "knots", "values", "overrides"});
      PiecewiseAffineFn fn;
      fn.knots = json_vector(need(j, "knots", where), where + ".knots");
      fn.values = json_vector(need(j, "values", where), where + ".values");
      return AtomFunction(n, std::move(fn), std::move(overrides));
    }
    if (kind == "table") {
      expect_keys(j, where, {"kind", "grid", "values", "overrides"});
      TableFn fn{parse_grid(need(j, "grid", where), where + ".grid"),
                 json_extended_vector(need(j, "values", where), where + ".values")};
      return AtomFunction(n, std::move(fn), std::move(overrides));
    }
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  fail(where + ".kind", "unknown kind \"" + kind +
                            "\" (quadratic, norm, indicator_box, max_affine, "
                            "piecewise_affine, table)");
}

FunctionDescriptor parse_function(const Json& j, int d, const std::string& where) {
  expect_keys(j, where, {"n", "components"});
  int n = json_int(need(j, "n", where), where + ".n");
  const Json& comps = need(j, "components", where);
  if (!comps.is_array() || comps.empty()) fail(where + ".components", "expected a nonempty array");
  std::vector<AtomFunction> components;
  for (size_t i = 0; i < comps.size(); ++i)
    components.push_back(
        parse_component(comps[i], n, where + ".components[" + std::to_string(i) + "]"));
  // One component broadcasts to every atom; otherwise one per atom.
  if (components.size() == 1 && d > 1)
    components.assign(static_cast<size_t>(d), components[0]);
  if (components.size() != static_cast<size_t>(d))
    fail(where + ".components", "expected 1 or exactly " + std::to_string(d) + " components");
  try {
    return FunctionDescriptor(n, std::move(components));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

CondVector parse_cond_point(const Json& j, int n, int d, const std::string& where) {
  expect_keys(j, where, {"constant", "per_atom"});
  const Json* c = find(j, "constant");
  const Json* pa = find(j, "per_atom");
  if (!!c == !!pa) fail(where, "exactly one of \"constant\" or \"per_atom\" is required");
  try {
    if (c) {
      Point x = json_vector(*c, where + ".constant");
      if (x.size() != static_cast<size_t>(n)) fail(where + ".constant", "wrong dimension");
      return CondVector::constant(d, x);
    }
    if (!pa->is_array() || pa->size() != static_cast<size_t>(d))
      fail(where + ".per_atom", "expected one point per atom");
    std::vector<Point> pts;
    for (size_t k = 0; k < pa->size(); ++k) {
      Point x = json_vector((*pa)[k], where + ".per_atom[" + std::to_string(k) + "]");
      if (x.size() != static_cast<size_t>(n)) fail(where + ".per_atom", "wrong dimension");
      pts.push_back(std::move(x));
    }
    return CondVector(n, pts);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

}  // namespace

double json_extended(const Json& v, const std::string& where) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    fail(where, "expected a number or \"inf\"/\"-inf\", got \"" + s + "\"");
  }
  return json_number(v, where);
}

Json extended_json(double v) {
  if (v == kInf) return Json("inf");
  if (v == -kInf) return Json("-inf");
  return Json(v);
}

Problem parse_problem_json(const Json& doc) {
  expect_keys(doc, "problem",
              {"algebra", "measure_space", "dual_pair", "function", "grids", "schedule",
               "options"});

  Problem p;
  const Json* algebra = find(doc, "algebra");
  const Json* space = find(doc, "measure_space");
  if (!!algebra == !!space)
    fail("problem", "exactly one of \"algebra\" or \"measure_space\" is required");
  if (algebra) {
    expect_keys(*algebra, "algebra", {"d"});
    p.d = json_int(need(*algebra, "d", "algebra"), "algebra.d");
    if (p.d < 1 || p.d > Condition::kMaxAtoms) fail("algebra.d", "out of range");
  } else {
    expect_keys(*space, "measure_space", {"labels", "weights"});
    const Json& labels = need(*space, "labels", "measure_space");
    if (!labels.is_array()) fail("measure_space.labels", "expected an array of strings");
    std::vector<std::string> names;
    for (size_t i = 0; i < labels.size(); ++i)
      names.push_back(json_string(labels[i], "measure_space.labels[" + std::to_string(i) + "]"));
    std::vector<double> weights =
        json_vector(need(*space, "weights", "measure_space"), "measure_space.weights");
    try {
      p.space = make_measure_space(std::move(names), std::move(weights));
    } catch (const std::invalid_argument& e) {
      fail("measure_space", e.what());
    }
    p.d = measure_algebra(*p.space).first;
  }

  if (const Json* fn = find(doc, "function")) p.function = parse_function(*fn, p.d, "function");

  if (const Json* pair = find(doc, "dual_pair")) {
    expect_keys(*pair, "dual_pair", {"n", "pairing", "weight", "norms"});
    int n = json_int(need(*pair, "n", "dual_pair"), "dual_pair.n");
    std::string kind = find(*pair, "pairing")
                           ? json_string(*find(*pair, "pairing"), "dual_pair.pairing")
                           : "dot";
    NormKind primal = NormKind::euclidean, dual = NormKind::euclidean;
    if (const Json* norms = find(*pair, "norms")) {
      expect_keys(*norms, "dual_pair.norms", {"primal", "dual"});
      if (find(*norms, "primal")) primal = parse_norm(*find(*norms, "primal"), "dual_pair.norms.primal");
      if (find(*norms, "dual")) dual = parse_norm(*find(*norms, "dual"), "dual_pair.norms.dual");
    }
    try {
      if (kind == "dot") {
        if (find(*pair, "weight")) fail("dual_pair.weight", "only valid for the weighted pairing");
        p.pair = make_dual_pair(n);
        p.pair.primal_norm = primal;
        p.pair.dual_norm = dual;
      } else if (kind == "weighted") {
        p.pair = make_weighted_dual_pair(
            n, json_vector(need(*pair, "weight", "dual_pair"), "dual_pair.weight"), primal, dual);
      } else {
        fail("dual_pair.pairing", "unknown pairing \"" + kind + "\" (dot, weighted)");
      }
    } catch (const std::invalid_argument& e) {
      fail("dual_pair", e.what());
    }
  } else if (p.function) {
    p.pair = make_dual_pair(p.function->dim());
  }

  if (const Json* grids = find(doc, "grids")) {
    expect_keys(*grids, "grids", {"primal", "dual"});
    if (find(*grids, "primal")) p.primal = parse_grid(*find(*grids, "primal"), "grids.primal");
    if (find(*grids, "dual")) p.dual = parse_grid(*find(*grids, "dual"), "grids.dual");
  }

  if (const Json* sched = find(doc, "schedule")) {
    expect_keys(*sched, "schedule", {"radii", "seed", "budget"});
    if (find(*sched, "radii")) {
      p.schedule.radii = json_vector(*find(*sched, "radii"), "schedule.radii");
      if (p.schedule.radii.empty()) fail("schedule.radii", "expected at least one radius");
    }
    if (find(*sched, "seed")) p.schedule.seed = json_seed(*find(*sched, "seed"), "schedule.seed");
    if (find(*sched, "budget")) {
      p.schedule.budget = json_int(*find(*sched, "budget"), "schedule.budget");
      if (p.schedule.budget < 0) fail("schedule.budget", "must be nonnegative");
    }
  }

  if (const Json* opts = find(doc, "options")) {
    expect_keys(*opts, "options",
                {"test_points", "num_test_points", "tol", "at", "lsc_kind", "points"});
    const int n = p.function ? p.function->dim() : p.pair.n;
    if (const Json* tp = find(*opts, "test_points")) {
      if (!tp->is_array()) fail("options.test_points", "expected an array of points");
      for (size_t i = 0; i < tp->size(); ++i) {
        Point x = json_vector((*tp)[i], "options.test_points[" + std::to_string(i) + "]");
        if (x.size() != static_cast<size_t>(n)) fail("options.test_points", "wrong dimension");
        p.test_points.push_back(std::move(x));
      }
    }
    if (find(*opts, "num_test_points")) {
      p.num_test_points = json_int(*find(*opts, "num_test_points"), "options.num_test_points");
      if (p.num_test_points < 0) fail("options.num_test_points", "must be nonnegative");
    }
    if (find(*opts, "tol")) {
      p.tol = json_number(*find(*opts, "tol"), "options.tol");
      if (*p.tol <= 0) fail("options.tol", "must be positive");
    }
    if (find(*opts, "at")) {
      p.lsc_at = json_vector(*find(*opts, "at"), "options.at");
      if (p.lsc_at->size() != static_cast<size_t>(n)) fail("options.at", "wrong dimension");
    }
    if (find(*opts, "lsc_kind")) {
      p.lsc_kind = json_string(*find(*opts, "lsc_kind"), "options.lsc_kind");
      if (p.lsc_kind != "weak" && p.lsc_kind != "ball" && p.lsc_kind != "both")
        fail("options.lsc_kind", "expected weak, ball, or both");
    }
    if (const Json* pts = find(*opts, "points")) {
      if (!pts->is_array()) fail("options.points", "expected an array");
      for (size_t i = 0; i < pts->size(); ++i)
        p.extend_points.push_back(
            parse_cond_point((*pts)[i], n, p.d, "options.points[" + std::to_string(i) + "]"));
    }
  }
  return p;
}

Problem parse_problem_file(const std::string& path) {
  std::string text = read_text_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path, e.what());
  }
  return parse_problem_json(doc);
}

std::string report_to_string(const Json& report) { return report.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw schema_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw schema_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw schema_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace condual
