#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace condual {

// A point of R^n. Desk-scale dimensions (n <= 3 for grid work), so a plain
// vector is the whole story.
using Point = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown when two values that must live over the same atom set do not.
struct algebra_mismatch_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an operation requires a proper function (never -inf, finite
// somewhere on every atom) and the input is not.
struct properness_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown on malformed problem files: unknown keys, wrong types, bad shapes.
struct schema_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline bool is_nan(double x) { return std::isnan(x); }

inline void reject_nan(std::span<const double> xs, const char* what) {
  for (double x : xs)
    if (std::isnan(x)) throw std::invalid_argument(std::string(what) + ": NaN is not a value");
}

// ----- small dense linear algebra, enough for n <= 3 grid work -----

inline double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

inline double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += std::fabs(x);
  return s;
}

inline double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::fabs(x));
  return m;
}

enum class NormKind { euclidean, l1, linf };

inline double norm_of(std::span<const double> a, NormKind k) {
  switch (k) {
    case NormKind::euclidean: return norm2(a);
    case NormKind::l1: return norm1(a);
    case NormKind::linf: return norm_inf(a);
  }
  throw std::logic_error("norm_of: bad kind");
}

// Solves A z = rhs for small n by Gaussian elimination with partial pivoting.
// A is n*n row-major. Throws on (numerically) singular A.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> rhs);

// Eigenvalues of a symmetric n*n matrix via cyclic Jacobi sweeps, ascending.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

}  // namespace condual
