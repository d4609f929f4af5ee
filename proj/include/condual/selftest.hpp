// Reusable self-check suites: Boolean lattice laws, restriction/concatenation
// stability, embedding isometry, and the Young-Fenchel inequality on the
// catalog. Shared by the CLI selftest verb and the test binaries.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace condual {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // counts and worst-case numbers, human-readable
};

// Lattice laws, exhaustive at d = 3 and randomized at d = 16.
std::vector<CheckResult> selftest_algebra_laws(std::uint64_t seed = 1);
// Restriction equality, consistency under smaller conditions, and unique
// concatenation along partitions; 1000 seeded cases each, d <= 8.
std::vector<CheckResult> selftest_stability(std::uint64_t seed = 1);
// Step-to-completed embedding preserves every catalog metric bitwise.
std::vector<CheckResult> selftest_isometry(std::uint64_t seed = 1);
// f(x) + f*(y) >= <x,y> for conjugates of catalog functions.
std::vector<CheckResult> selftest_young_fenchel(std::uint64_t seed = 1);

std::vector<CheckResult> run_selftest(std::uint64_t seed = 1);

bool all_pass(std::span<const CheckResult> results);

}  // namespace condual
