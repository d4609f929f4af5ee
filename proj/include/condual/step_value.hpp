#pragma once

#include <span>
#include <vector>

#include "condual/boolean_algebra.hpp"

namespace condual {

// A value that is constant on each atom: the canonical representative of
// "x_1 on block a_1, ..., x_m on block a_m" is the total atom-indexed map.
template <typename T>
class StepValue {
 public:
  StepValue(int d, std::vector<T> per_atom) : d_(d), per_atom_(std::move(per_atom)) {
    require(d >= 1 && d <= Condition::kMaxAtoms, "StepValue: atom count out of range");
    require(per_atom_.size() == static_cast<size_t>(d), "StepValue: needs one value per atom");
  }

  static StepValue constant(int d, T v) { return StepValue(d, std::vector<T>(d, std::move(v))); }

  int algebra_size() const { return d_; }
  const T& at_atom(int k) const { return per_atom_[k]; }
  T& at_atom(int k) { return per_atom_[k]; }
  const std::vector<T>& per_atom() const { return per_atom_; }

  friend bool operator==(const StepValue&, const StepValue&) = default;

 private:
  int d_;
  std::vector<T> per_atom_;
};

// A step value known only on a condition. Two restrictions are equal iff
// their conditions coincide and their values agree on every atom of it;
// values off the condition never participate in equality.
template <typename T>
class Restricted {
 public:
  Restricted(StepValue<T> source, Condition on) : source_(std::move(source)), on_(on) {
    require_same_algebra(source_.algebra_size(), on_.algebra_size(), "restrict_to");
  }

  const Condition& condition() const { return on_; }
  const T& at_atom(int k) const {
    require(on_.contains(k), "Restricted: atom lies outside the condition");
    return source_.at_atom(k);
  }

  friend bool operator==(const Restricted& a, const Restricted& b) {
    if (a.on_ != b.on_) return false;
    for (int k : a.on_.atoms())
      if (!(a.source_.at_atom(k) == b.source_.at_atom(k))) return false;
    return true;
  }

 private:
  StepValue<T> source_;
  Condition on_;
};

template <typename T>
Restricted<T> restrict_to(const StepValue<T>& x, const Condition& a) {
  return Restricted<T>(x, a);
}

// Splices one value per partition block into the unique step value that
// restricts back to each piece on its block.
template <typename T>
StepValue<T> concatenate(const Partition& p, std::span<const StepValue<T>> pieces) {
  require(pieces.size() == p.size(), "concatenate: needs exactly one value per block");
  const int d = p.algebra_size();
  std::vector<T> out;
  out.reserve(d);
  for (int k = 0; k < d; ++k) {
    const StepValue<T>& piece = pieces[p.block_of_atom(k)];
    require_same_algebra(piece.algebra_size(), d, "concatenate");
    out.push_back(piece.at_atom(k));
  }
  return StepValue<T>(d, std::move(out));
}

template <typename T>
StepValue<T> concatenate(const Partition& p, std::initializer_list<StepValue<T>> pieces) {
  return concatenate(p, std::span<const StepValue<T>>(pieces.begin(), pieces.size()));
}

// The largest condition on which the two values agree.
template <typename T>
Condition agreement(const StepValue<T>& x, const StepValue<T>& y) {
  require_same_algebra(x.algebra_size(), y.algebra_size(), "agreement");
  const int d = x.algebra_size();
  std::uint64_t m = 0;
  for (int k = 0; k < d; ++k)
    if (x.at_atom(k) == y.at_atom(k)) m |= std::uint64_t{1} << k;
  return Condition::from_mask(d, m);
}

}  // namespace condual
