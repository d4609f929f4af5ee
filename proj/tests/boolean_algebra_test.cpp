#include <doctest.h>

#include <random>

#include "condual/boolean_algebra.hpp"
#include "condual/selftest.hpp"

using namespace condual;

TEST_CASE("condition basics and factories") {
  Condition a = Condition::from_atoms(3, std::vector<int>{0, 1});
  CHECK(a.algebra_size() == 3);
  CHECK(a.mask() == 0b011);
  CHECK(a.contains(0));
  CHECK(a.contains(1));
  CHECK(!a.contains(2));
  CHECK(a.atom_count() == 2);
  CHECK(a.least_atom() == 0);
  CHECK(a.atoms() == std::vector<int>{0, 1});

  CHECK(Condition::bottom(3).is_bottom());
  CHECK(Condition::top(3).is_top());
  CHECK(Condition::single_atom(3, 2).mask() == 0b100);

  CHECK_THROWS_AS(Condition::from_atoms(3, std::vector<int>{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Condition::from_atoms(3, std::vector<int>{2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Condition::single_atom(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(Condition::from_mask(2, 0b100), std::invalid_argument);
  CHECK_THROWS_AS(Condition::from_mask(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Condition::from_mask(65, 0), std::invalid_argument);
}

TEST_CASE("meet, join, complement on small examples") {
  Condition a = Condition::from_mask(3, 0b011);
  Condition b = Condition::from_mask(3, 0b110);
  CHECK(meet(a, b) == Condition::from_mask(3, 0b010));
  CHECK(join(a, b) == Condition::top(3));
  CHECK(complement_of(a) == Condition::from_mask(3, 0b100));
  CHECK(leq(meet(a, b), a));
  CHECK(leq(a, join(a, b)));
  CHECK(!leq(a, b));

  CHECK_THROWS_AS(meet(a, Condition::top(4)), algebra_mismatch_error);
}

TEST_CASE("family supremum and infimum, empty-family conventions") {
  std::vector<Condition> fam{Condition::from_mask(4, 0b0001), Condition::from_mask(4, 0b0110)};
  CHECK(sup_all(4, fam) == Condition::from_mask(4, 0b0111));
  CHECK(inf_all(4, fam) == Condition::bottom(4));
  CHECK(sup_all(4, {}) == Condition::bottom(4));
  CHECK(inf_all(4, {}) == Condition::top(4));
}

TEST_CASE("partition canonical form drops empty blocks and sorts by least atom") {
  std::vector<Condition> blocks{Condition::from_mask(3, 0b110), Condition::bottom(3),
                                Condition::from_mask(3, 0b001)};
  Partition p(3, blocks);
  REQUIRE(p.size() == 2);
  CHECK(p.block(0) == Condition::from_mask(3, 0b001));
  CHECK(p.block(1) == Condition::from_mask(3, 0b110));
  CHECK(p.block_of_atom(0) == 0);
  CHECK(p.block_of_atom(1) == 1);
  CHECK(p.block_of_atom(2) == 1);

  // Input order is irrelevant: the canonical form is a set of blocks.
  Partition q(3, {Condition::from_mask(3, 0b001), Condition::from_mask(3, 0b110)});
  CHECK(p == q);

  CHECK(Partition::trivial(3).size() == 1);
  CHECK(Partition::trivial(3).block(0) == Condition::top(3));
  CHECK(Partition::into_atoms(3).size() == 3);

  // Overlapping or non-covering families are not partitions.
  CHECK_THROWS_AS(Partition(3, {Condition::from_mask(3, 0b011), Condition::from_mask(3, 0b110)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Partition(3, {Condition::from_mask(3, 0b011)}), std::invalid_argument);
  CHECK(is_partition(3, std::vector<Condition>{Condition::from_mask(3, 0b011),
                                               Condition::from_mask(3, 0b100)}));
}

TEST_CASE("common refinement") {
  Partition p(4, {Condition::from_mask(4, 0b0011), Condition::from_mask(4, 0b1100)});
  Partition q(4, {Condition::from_mask(4, 0b0101), Condition::from_mask(4, 0b1010)});
  Partition r = refine(p, q);
  REQUIRE(r.size() == 4);
  CHECK(r == Partition::into_atoms(4));
  CHECK(refine(p, Partition::trivial(4)) == p);
}

TEST_CASE("lattice laws hold exhaustively at d=3 and on random d=16 triples") {
  for (const CheckResult& r : selftest_algebra_laws(1)) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("leq is a partial order consistent with meet and join") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    int d = 1 + static_cast<int>(rng() % 10);
    std::uint64_t full = (std::uint64_t{1} << d) - 1;
    Condition a = Condition::from_mask(d, rng() & full);
    Condition b = Condition::from_mask(d, rng() & full);
    Condition c = Condition::from_mask(d, rng() & full);
    CHECK(leq(a, a));
    if (leq(a, b) && leq(b, a)) CHECK(a == b);
    if (leq(a, b) && leq(b, c)) CHECK(leq(a, c));
    CHECK(leq(Condition::bottom(d), a));
    CHECK(leq(a, Condition::top(d)));
  }
}
