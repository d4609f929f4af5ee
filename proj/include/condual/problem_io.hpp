// JSON problem files and deterministic JSON reports. Every parse failure —
// bad file, bad JSON, unknown key, wrong type, out-of-range value — is a
// schema_error; the CLI maps those to its own exit code.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "condual/bochner.hpp"
#include "condual/dual_pair.hpp"
#include "condual/function_catalog.hpp"
#include "condual/lsc.hpp"

namespace condual {

using Json = nlohmann::ordered_json;

struct Problem {
  int d = 1;
  std::optional<FiniteMeasureSpace> space;  // present iff declared as a measure space
  DualPairConfig pair;
  std::optional<FunctionDescriptor> function;
  std::optional<GridSpec> primal;
  std::optional<GridSpec> dual;  // defaulted from the subgradient range when absent
  LscSchedule schedule;

  // command-specific options
  std::vector<Point> test_points;  // check-duality: explicit points
  int num_test_points = 0;         // check-duality: seeded points to generate
  std::optional<double> tol;
  std::optional<Point> lsc_at;
  std::string lsc_kind = "both";  // weak | ball | both
  std::vector<CondVector> extend_points;
};

Problem parse_problem_file(const std::string& path);
Problem parse_problem_json(const Json& doc);

// Extended reals in JSON: a number, or the strings "inf" / "-inf".
double json_extended(const Json& v, const std::string& where);
Json extended_json(double v);

// Serialize with 2-space indent and a trailing newline; key order is
// insertion order, so equal reports are byte-identical.
std::string report_to_string(const Json& report);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace condual
