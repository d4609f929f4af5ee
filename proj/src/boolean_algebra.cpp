#include "condual/boolean_algebra.hpp"

#include <algorithm>
#include <bit>

namespace condual {

void require_same_algebra(int da, int db, const char* op) {
  if (da != db)
    throw algebra_mismatch_error(std::string(op) + ": operands live over different atom sets");
}

static void check_d(int d) {
  require(d >= 1 && d <= Condition::kMaxAtoms, "Condition: atom count out of range [1, 64]");
}

Condition Condition::single_atom(int d, int atom) {
  check_d(d);
  require(atom >= 0 && atom < d, "Condition: atom index out of range");
  return Condition(d, std::uint64_t{1} << atom);
}

Condition Condition::from_atoms(int d, std::span<const int> atoms) {
  check_d(d);
  std::uint64_t m = 0;
  int prev = -1;
  for (int a : atoms) {
    require(a >= 0 && a < d, "Condition: atom index out of range");
    require(a > prev, "Condition: atom list must be strictly increasing");
    prev = a;
    m |= std::uint64_t{1} << a;
  }
  return Condition(d, m);
}

Condition Condition::from_mask(int d, std::uint64_t mask) {
  check_d(d);
  require((mask & ~Condition::full_mask(d)) == 0, "Condition: mask has bits beyond atom count");
  return Condition(d, mask);
}

int Condition::atom_count() const { return std::popcount(mask_); }

int Condition::least_atom() const {
  if (mask_ == 0) return -1;
  return std::countr_zero(mask_);
}

std::vector<int> Condition::atoms() const {
  std::vector<int> out;
  out.reserve(atom_count());
  for (int i = 0; i < d_; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

Condition meet(const Condition& a, const Condition& b) {
  require_same_algebra(a.algebra_size(), b.algebra_size(), "meet");
  return Condition::from_mask(a.algebra_size(), a.mask() & b.mask());
}

Condition join(const Condition& a, const Condition& b) {
  require_same_algebra(a.algebra_size(), b.algebra_size(), "join");
  return Condition::from_mask(a.algebra_size(), a.mask() | b.mask());
}

Condition complement_of(const Condition& a) {
  return Condition::from_mask(a.algebra_size(),
                              a.mask() ^ Condition::top(a.algebra_size()).mask());
}

bool leq(const Condition& a, const Condition& b) {
  require_same_algebra(a.algebra_size(), b.algebra_size(), "leq");
  return (a.mask() & ~b.mask()) == 0;
}

Condition sup_all(int d, std::span<const Condition> family) {
  Condition acc = Condition::bottom(d);
  for (const Condition& c : family) acc = join(acc, c);
  return acc;
}

Condition inf_all(int d, std::span<const Condition> family) {
  Condition acc = Condition::top(d);
  for (const Condition& c : family) acc = meet(acc, c);
  return acc;
}

bool is_partition(int d, std::span<const Condition> family) {
  std::uint64_t seen = 0;
  for (const Condition& c : family) {
    require_same_algebra(d, c.algebra_size(), "is_partition");
    if (seen & c.mask()) return false;
    seen |= c.mask();
  }
  return seen == Condition::top(d).mask();
}

Partition::Partition(int d, std::vector<Condition> blocks) : d_(d) {
  check_d(d);
  require(is_partition(d, blocks), "Partition: blocks must be disjoint and cover all atoms");
  blocks_.reserve(blocks.size());
  for (const Condition& c : blocks)
    if (!c.is_bottom()) blocks_.push_back(c);
  std::sort(blocks_.begin(), blocks_.end(),
            [](const Condition& a, const Condition& b) { return a.least_atom() < b.least_atom(); });
}

Partition Partition::trivial(int d) { return Partition(d, {Condition::top(d)}); }

Partition Partition::into_atoms(int d) {
  std::vector<Condition> bs;
  bs.reserve(d);
  for (int i = 0; i < d; ++i) bs.push_back(Condition::single_atom(d, i));
  return Partition(d, std::move(bs));
}

size_t Partition::block_of_atom(int atom) const {
  require(atom >= 0 && atom < d_, "Partition: atom index out of range");
  for (size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i].contains(atom)) return i;
  throw std::logic_error("Partition: canonical form must cover every atom");
}

Partition refine(const Partition& p, const Partition& q) {
  require_same_algebra(p.algebra_size(), q.algebra_size(), "refine");
  std::vector<Condition> out;
  for (const Condition& a : p.blocks())
    for (const Condition& b : q.blocks()) {
      Condition m = meet(a, b);
      if (!m.is_bottom()) out.push_back(m);
    }
  return Partition(p.algebra_size(), std::move(out));
}

}  // namespace condual
