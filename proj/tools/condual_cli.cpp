// Batch front-end: parse a JSON problem file, run one of the verbs
// (conjugate, check-duality, check-lsc, extend, selftest), write CSV grids
// and a deterministic JSON report.
//
// Exit codes: 0 all checks pass; 1 a check failed; 2 schema or usage error
// (bad file, bad JSON, unknown key, invalid configuration); 3 properness
// violation; 4 internal error. Timing goes to stderr only, so reruns with
// the same file, seed, and flags produce byte-identical outputs.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "condual/conjugate.hpp"
#include "condual/problem_io.hpp"
#include "condual/selftest.hpp"

namespace {

using condual::Json;

struct Options {
  std::string verb;
  std::string problem;
  std::string out = ".";
  bool oracle = false;
  long long seed = -1;  // -1: use the problem file's schedule seed
  int threads = 0;      // 0: CONDUAL_THREADS or 1
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CONDUAL_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

Json grid_json(const condual::GridSpec& g) {
  Json axes = Json::array();
  for (int j = 0; j < g.dims(); ++j)
    axes.push_back(Json{{"lo", g.axis(j).lo}, {"hi", g.axis(j).hi}, {"count", g.axis(j).count}});
  return Json{{"axes", axes}};
}

Json checks_json(const std::vector<condual::CheckResult>& checks) {
  Json arr = Json::array();
  for (const condual::CheckResult& c : checks)
    arr.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return arr;
}

Json summary_lines(const std::vector<condual::CheckResult>& checks) {
  Json lines = Json::array();
  for (const condual::CheckResult& c : checks)
    lines.push_back(std::string(c.pass ? "[PASS] " : "[FAIL] ") + c.name + ": " + c.detail);
  return lines;
}

std::string format_num(double v) { return condual::format_double(v); }

void write_report(const Options& opt, const std::string& name, const Json& report) {
  std::filesystem::create_directories(opt.out);
  condual::write_text_file((std::filesystem::path(opt.out) / name).string(),
                           condual::report_to_string(report));
}

condual::Problem load_problem(const Options& opt) {
  if (opt.problem.empty())
    throw condual::schema_error(opt.verb + ": --problem FILE is required");
  condual::Problem p = condual::parse_problem_file(opt.problem);
  if (opt.seed >= 0) p.schedule.seed = static_cast<std::uint64_t>(opt.seed);
  return p;
}

const condual::FunctionDescriptor& need_function(const condual::Problem& p) {
  if (!p.function) throw condual::schema_error("problem: a \"function\" section is required");
  return *p.function;
}

const condual::GridSpec& need_primal(const condual::Problem& p) {
  if (!p.primal) throw condual::schema_error("problem: grids.primal is required");
  return *p.primal;
}

Json report_header(const Options& opt, const condual::Problem& p) {
  Json r;
  r["command"] = opt.verb;
  r["problem"] = opt.problem;
  r["seed"] = p.schedule.seed;
  r["algebra"] = Json{{"d", p.d}};
  if (p.space) {
    Json labels = Json::array(), weights = Json::array();
    for (const std::string& l : p.space->labels) labels.push_back(l);
    for (double w : p.space->weights) weights.push_back(w);
    r["measure_space"] = Json{{"labels", labels}, {"weights", weights}};
  }
  return r;
}

int finish(const Options& opt, const std::string& report_name, Json& report,
           const std::vector<condual::CheckResult>& checks) {
  bool pass = condual::all_pass(checks);
  report["checks"] = checks_json(checks);
  report["pass"] = pass;
  report["summary_lines"] = summary_lines(checks);
  write_report(opt, report_name, report);
  for (const Json& line : report["summary_lines"]) std::cout << line.get<std::string>() << "\n";
  return pass ? 0 : 1;
}

int cmd_conjugate(const Options& opt) {
  condual::Problem p = load_problem(opt);
  const condual::FunctionDescriptor& f = need_function(p);
  const condual::GridSpec& primal = need_primal(p);
  bool dual_defaulted = !p.dual.has_value();
  condual::GridSpec dual = p.dual ? *p.dual : condual::default_dual_grid(f, primal);

  condual::GridFunction fg = condual::sample(f, primal);
  int threads = resolve_threads(opt.threads);
  condual::GridFunction fstar = condual::conjugate_fast(fg, dual, threads);

  Json report = report_header(opt, p);
  report["primal"] = grid_json(primal);
  report["dual"] = grid_json(dual);
  report["dual_grid_defaulted"] = dual_defaulted;

  // Truncation warning: the dual grid should cover the subgradient range.
  bool truncated = false;
  std::vector<std::pair<double, double>> slopes = f.slope_range_on(primal);
  for (int j = 0; j < dual.dims(); ++j)
    truncated = truncated || slopes[j].first < dual.axis(j).lo ||
                slopes[j].second > dual.axis(j).hi;
  report["dual_grid_truncated"] = truncated;

  std::vector<condual::CheckResult> checks;
  checks.push_back({"conjugate computed",
                    true,
                    std::to_string(dual.num_nodes()) + " dual nodes, " + std::to_string(p.d) +
                        " atoms"});
  if (opt.oracle) {
    condual::GridFunction brute = condual::conjugate_brute(fg, dual, threads);
    double worst = 0.0;
    for (size_t i = 0; i < fstar.values.size(); ++i) {
      double a = fstar.values[i], b = brute.values[i];
      if (a == b) continue;  // covers matching infinities
      worst = std::max(worst, std::fabs(a - b));
    }
    checks.push_back({"oracle agreement", worst <= 1e-9,
                      "max |fast - brute| = " + format_num(worst) + ", tolerance 1e-9"});
  }

  std::filesystem::create_directories(opt.out);
  condual::write_text_file((std::filesystem::path(opt.out) / "conjugate.csv").string(),
                           condual::to_csv(fstar));
  report["outputs"] = Json{{"csv", "conjugate.csv"}};
  return finish(opt, "conjugate_report.json", report, checks);
}

int cmd_check_duality(const Options& opt) {
  condual::Problem p = load_problem(opt);
  const condual::FunctionDescriptor& f = need_function(p);
  const condual::GridSpec& primal = need_primal(p);
  condual::GridSpec dual = p.dual ? *p.dual : condual::default_dual_grid(f, primal);

  std::vector<condual::Point> points = p.test_points;
  int generate = p.num_test_points;
  if (points.empty() && generate == 0) generate = 100;
  std::mt19937_64 rng(p.schedule.seed);
  for (int t = 0; t < generate; ++t) {
    condual::Point x(f.dim());
    for (int j = 0; j < primal.dims(); ++j) {
      std::uniform_real_distribution<double> uni(primal.axis(j).lo, primal.axis(j).hi);
      x[j] = uni(rng);
    }
    points.push_back(std::move(x));
  }

  double tol = p.tol ? *p.tol : 0.0;
  condual::DualityReport rep =
      condual::check_duality(f, points, primal, dual, tol, condual::ConjMethod::fast,
                             resolve_threads(opt.threads));

  Json report = report_header(opt, p);
  report["primal"] = grid_json(primal);
  report["dual"] = grid_json(dual);
  report["tol"] = rep.tol;
  report["max_residual"] = condual::extended_json(rep.max_residual);
  report["min_residual"] = condual::extended_json(rep.min_residual);
  report["negative_residual_bug"] = rep.negative_residual_bug;
  report["dual_grid_truncated"] = rep.dual_grid_truncated;

  Json rows = Json::array();
  for (const condual::DualityPointRow& row : rep.rows) {
    Json values = Json::array(), repr = Json::array(), residual = Json::array(),
         argmax = Json::array();
    for (int k = 0; k < p.d; ++k) {
      values.push_back(condual::extended_json(row.value[k]));
      repr.push_back(condual::extended_json(row.representation[k]));
      residual.push_back(condual::extended_json(row.residual[k]));
      Json node = Json::array();
      for (double c : dual.node(row.argmax_node[k])) node.push_back(c);
      argmax.push_back(node);
    }
    rows.push_back(Json{{"x", row.x},
                        {"value", values},
                        {"representation", repr},
                        {"residual", residual},
                        {"argmax_dual", argmax}});
  }
  report["points"] = rows;

  std::vector<condual::CheckResult> checks;
  std::string detail = std::to_string(points.size()) + " points, residuals in [" +
                       format_num(rep.min_residual) + ", " + format_num(rep.max_residual) +
                       "], tolerance " + format_num(rep.tol);
  checks.push_back({"duality residuals", rep.pass, detail});
  if (rep.negative_residual_bug)
    checks.push_back({"conjugation consistency", false,
                      "residual below -tolerance: conjugation bug"});
  return finish(opt, "check_duality_report.json", report, checks);
}

int cmd_check_lsc(const Options& opt) {
  condual::Problem p = load_problem(opt);
  const condual::FunctionDescriptor& f = need_function(p);
  const condual::GridSpec& primal = need_primal(p);
  condual::Point at = p.lsc_at ? *p.lsc_at : condual::Point(f.dim(), 0.0);
  condual::VectorFunction vf{f, primal};
  condual::LscSchedule schedule = p.schedule;
  if (schedule.radii.empty()) schedule = condual::default_schedule(20, schedule.budget, schedule.seed);
  double tol = p.tol ? *p.tol : 1e-4;

  Json report = report_header(opt, p);
  report["at"] = at;
  report["tol"] = tol;
  Json radii = Json::array();
  for (double r : schedule.radii) radii.push_back(r);
  report["schedule"] =
      Json{{"radii", radii}, {"budget", schedule.budget}, {"seed", schedule.seed}};

  std::vector<condual::CheckResult> checks;
  auto run_kind = [&](condual::NeighborhoodKind kind, const char* name) {
    condual::LscAtResult res = condual::is_lsc_at(vf, at, schedule, kind, tol);
    Json gaps = Json::array();
    double worst = 0.0;
    for (int k = 0; k < p.d; ++k) {
      gaps.push_back(condual::extended_json(res.gap[k]));
      worst = std::max(worst, res.gap[k]);
    }
    report[std::string("gap_") + name] = gaps;
    checks.push_back({std::string("lower semicontinuity, ") + name + " neighborhoods", res.lsc,
                      "worst atom gap " + format_num(worst) + ", tolerance " + format_num(tol)});
  };
  if (p.lsc_kind == "weak" || p.lsc_kind == "both")
    run_kind(condual::NeighborhoodKind::weak_basis, "weak");
  if (p.lsc_kind == "ball" || p.lsc_kind == "both")
    run_kind(condual::NeighborhoodKind::norm_ball, "ball");
  return finish(opt, "check_lsc_report.json", report, checks);
}

int cmd_extend(const Options& opt) {
  condual::Problem p = load_problem(opt);
  const condual::FunctionDescriptor& f = need_function(p);
  const condual::GridSpec& primal = need_primal(p);
  if (p.extend_points.empty())
    throw condual::schema_error("extend: options.points must list at least one conditional point");
  condual::VectorFunction vf{f, primal};

  Json report = report_header(opt, p);
  Json rows = Json::array();
  for (const condual::CondVector& xc : p.extend_points) {
    condual::CondExtReal v = condual::cond_extend(vf, xc);
    Json atoms = Json::array(), values = Json::array();
    for (int k = 0; k < p.d; ++k) {
      atoms.push_back(xc.atom_point(k));
      values.push_back(condual::extended_json(v[k]));
    }
    rows.push_back(Json{{"per_atom", atoms}, {"value", values}});
  }
  report["points"] = rows;

  std::vector<condual::CheckResult> checks;
  checks.push_back({"maximal lsc convex extension", true,
                    std::to_string(p.extend_points.size()) + " conditional points evaluated"});
  return finish(opt, "extend_report.json", report, checks);
}

int cmd_selftest(const Options& opt) {
  std::uint64_t seed = opt.seed >= 0 ? static_cast<std::uint64_t>(opt.seed) : 1;
  std::vector<condual::CheckResult> checks = condual::run_selftest(seed);
  Json report;
  report["command"] = "selftest";
  report["seed"] = seed;
  return finish(opt, "selftest_report.json", report, checks);
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"conditional convex duality toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--problem", opt.problem, "problem file (JSON)");
  app.add_option("--out", opt.out, "output directory (default: current)");
  app.add_flag("--oracle", opt.oracle, "cross-check the fast conjugate against the direct scan");
  app.add_option("--seed", opt.seed, "override the schedule seed");
  app.add_option("--threads", opt.threads, "worker threads (default: CONDUAL_THREADS or 1)");
  app.add_subcommand("conjugate", "sample the function and write its conjugate as CSV");
  app.add_subcommand("check-duality", "verify the biconjugation identity at test points");
  app.add_subcommand("check-lsc", "test lower semicontinuity at a point");
  app.add_subcommand("extend", "evaluate the maximal lsc convex extension");
  app.add_subcommand("selftest", "run the built-in property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.verb = app.get_subcommands().front()->get_name();

  auto started = std::chrono::steady_clock::now();
  int code = 4;
  try {
    if (opt.verb == "conjugate") code = cmd_conjugate(opt);
    else if (opt.verb == "check-duality") code = cmd_check_duality(opt);
    else if (opt.verb == "check-lsc") code = cmd_check_lsc(opt);
    else if (opt.verb == "extend") code = cmd_extend(opt);
    else code = cmd_selftest(opt);
  } catch (const condual::properness_error& e) {
    std::cerr << "properness violation: " << e.what() << "\n";
    code = 3;
  } catch (const condual::schema_error& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    code = 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid problem: " << e.what() << "\n";
    code = 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    code = 4;
  }
  std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  std::cerr << "timing: " << opt.verb << " " << elapsed.count() << "s\n";
  return code;
}
