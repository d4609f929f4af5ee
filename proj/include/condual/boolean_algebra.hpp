#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "condual/core.hpp"

namespace condual {

// An element of the power-set algebra over d atoms, kept as a bitmask.
// d is capped at 64; everything downstream works at desk scale well below
// that, and the cap keeps lattice operations branch-free.
class Condition {
 public:
  static constexpr int kMaxAtoms = 64;

  static Condition bottom(int d) { return Condition(d, 0); }
  static Condition top(int d) { return Condition(d, full_mask(d)); }
  static Condition single_atom(int d, int atom);
  // Atom indices must be strictly increasing and in [0, d).
  static Condition from_atoms(int d, std::span<const int> atoms);
  static Condition from_mask(int d, std::uint64_t mask);

  int algebra_size() const { return d_; }
  std::uint64_t mask() const { return mask_; }
  bool contains(int atom) const { return (mask_ >> atom) & 1u; }
  bool is_bottom() const { return mask_ == 0; }
  bool is_top() const { return mask_ == full_mask(d_); }
  int atom_count() const;
  int least_atom() const;  // -1 for the bottom condition
  std::vector<int> atoms() const;

  friend bool operator==(const Condition&, const Condition&) = default;

 private:
  Condition(int d, std::uint64_t mask) : d_(d), mask_(mask) {}
  static std::uint64_t full_mask(int d) {
    return d == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << d) - 1);
  }

  int d_;
  std::uint64_t mask_;
};

Condition meet(const Condition& a, const Condition& b);
Condition join(const Condition& a, const Condition& b);
Condition complement_of(const Condition& a);
bool leq(const Condition& a, const Condition& b);

// Supremum of a family; the empty family yields bottom.
Condition sup_all(int d, std::span<const Condition> family);
// Infimum of a family; the empty family yields top.
Condition inf_all(int d, std::span<const Condition> family);

// True iff the family is pairwise disjoint and joins to the top condition.
bool is_partition(int d, std::span<const Condition> family);

// A finite partition of the top condition. Canonical form: empty blocks
// dropped, blocks sorted by least atom.
class Partition {
 public:
  Partition(int d, std::vector<Condition> blocks);
  static Partition trivial(int d);    // one block, the top condition
  static Partition into_atoms(int d); // one block per atom

  int algebra_size() const { return d_; }
  std::span<const Condition> blocks() const { return blocks_; }
  size_t size() const { return blocks_.size(); }
  const Condition& block(size_t i) const { return blocks_[i]; }
  // Index of the block containing the given atom.
  size_t block_of_atom(int atom) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  int d_;
  std::vector<Condition> blocks_;
};

// Common refinement: all nonempty pairwise meets, canonicalized.
Partition refine(const Partition& p, const Partition& q);

void require_same_algebra(int da, int db, const char* op);

}  // namespace condual
