#include "koehler/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace koehler;

namespace {
const double kPi = std::acos(-1.0);

// Brute-force oracle: all k^k transformations on k points.
std::vector<Transformation> all_transformations(int k) {
  std::vector<Transformation> out;
  std::vector<int> f(static_cast<std::size_t>(k), 0);
  while (true) {
    out.push_back(f);
    int pos = 0;
    while (pos < k && ++f[static_cast<std::size_t>(pos)] == k) {
      f[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == k) break;
  }
  return out;
}

Transformation compose(const Transformation& f, const Transformation& g) {
  Transformation out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    out[x] = f[static_cast<std::size_t>(g[x])];
  }
  return out;
}
}  // namespace

TEST_CASE("full transformation monoid on two points") {
  // {swap, const_0} generate all four maps
  auto s = generate_transformation_semigroup({{1, 0}, {0, 0}});
  CHECK(s.size == 4);
  CHECK(idempotents(s).size() == 3);
  const auto order = idempotent_order(s);
  const auto es = idempotents(s);
  for (int e : es) {
    CHECK(std::count(order.begin(), order.end(), std::make_pair(e, e)) == 1);
  }
  // locate elements
  const auto& elems = std::get<std::vector<Transformation>>(s.meta);
  int id = -1, c0 = -1, c1 = -1;
  for (int i = 0; i < s.size; ++i) {
    const auto& f = elems[static_cast<std::size_t>(i)];
    if (f == Transformation{0, 1}) id = i;
    if (f == Transformation{0, 0}) c0 = i;
    if (f == Transformation{1, 1}) c1 = i;
  }
  REQUIRE(id >= 0);
  REQUIRE(c0 >= 0);
  REQUIRE(c1 >= 0);
  auto leq = [&](int p, int q) {
    return std::count(order.begin(), order.end(), std::make_pair(p, q)) == 1;
  };
  CHECK(leq(c0, id));
  CHECK(leq(c1, id));
  CHECK_FALSE(leq(c0, c1));
  CHECK_FALSE(leq(c1, c0));

  // the constants form the single minimal left ideal; each constant is a
  // minimal right ideal on its own
  auto ideals = minimal_ideals(s);
  std::vector<std::vector<int>> min_left, min_right;
  for (const auto& r : ideals.left)
    if (r.minimal) min_left.push_back(r.members);
  for (const auto& r : ideals.right)
    if (r.minimal) min_right.push_back(r.members);
  REQUIRE(min_left.size() == 1);
  CHECK(min_left[0] == std::vector<int>{std::min(c0, c1), std::max(c0, c1)});
  REQUIRE(min_right.size() == 2);

  CHECK(minimal_idempotents(s) ==
        std::vector<int>{std::min(c0, c1), std::max(c0, c1)});
  CHECK(rees_checks(s).status == "pass");
  auto corr = minidem_correspondence(s);
  CHECK(corr.status == "pass");
  CHECK(corr.certificates["minimal_left_ideals"] == 1);
  CHECK(corr.certificates["minimal_right_ideals"] == 2);

  CHECK(center(s) == std::vector<int>{id});
}

TEST_CASE("permutations plus a constant only reach rank 3 and rank 1") {
  // rank cannot grow under composition, so a constant does not help
  // generate the full monoid: the closure is S_3 together with the
  // three constants.
  auto s = generate_transformation_semigroup(
      {{1, 2, 0}, {1, 0, 2}, {0, 0, 0}});
  CHECK(s.size == 9);
  CHECK(idempotents(s).size() == 4);  // identity + three constants
  CHECK(minimal_idempotents(s).size() == 3);
  CHECK(rees_checks(s).status == "pass");
  auto corr = minidem_correspondence(s);
  CHECK(corr.status == "pass");
  CHECK(corr.certificates["minimal_left_ideals"] == 1);
  CHECK(corr.certificates["minimal_right_ideals"] == 3);
}

TEST_CASE("full transformation monoid on three points") {
  // classical generators: the 3-cycle, a transposition, and a rank-2 merge
  auto s = generate_transformation_semigroup(
      {{1, 2, 0}, {1, 0, 2}, {0, 0, 2}});
  CHECK(s.size == 27);

  // independent oracle: enumerate all 27 maps and count f o f = f
  const auto all = all_transformations(3);
  REQUIRE(all.size() == 27);
  int oracle_idempotents = 0;
  for (const auto& f : all) {
    if (compose(f, f) == f) ++oracle_idempotents;
  }
  CHECK(oracle_idempotents == 10);
  CHECK(idempotents(s).size() == 10);

  // every element of T_3 was discovered
  const auto& elems = std::get<std::vector<Transformation>>(s.meta);
  std::set<Transformation> found(elems.begin(), elems.end());
  CHECK(found.size() == 27);

  CHECK(minimal_idempotents(s).size() == 3);  // the three constants
  CHECK(rees_checks(s).status == "pass");

  auto corr = minidem_correspondence(s);
  CHECK(corr.status == "pass");
  CHECK(corr.certificates["minimal_left_ideals"] == 1);
  CHECK(corr.certificates["minimal_right_ideals"] == 3);
  CHECK(corr.certificates["minimal_idempotents"] == 3);

  CHECK(center(s).size() == 1);  // only the identity is central
}

TEST_CASE("left-zero semigroup, abstract table") {
  // x * y = x
  auto s = from_cayley_table({{0, 0}, {1, 1}});
  CHECK(idempotents(s) == std::vector<int>{0, 1});
  auto ideals = minimal_ideals(s);
  std::vector<std::vector<int>> min_left, min_right;
  for (const auto& r : ideals.left)
    if (r.minimal) min_left.push_back(r.members);
  for (const auto& r : ideals.right)
    if (r.minimal) min_right.push_back(r.members);
  // with S*a = {x*a : x} = S, the two-element set is the one minimal left
  // ideal; each {a} = a*S is a minimal right ideal
  REQUIRE(min_left.size() == 1);
  CHECK(min_left[0] == std::vector<int>{0, 1});
  REQUIRE(min_right.size() == 2);
  CHECK(min_right[0] == std::vector<int>{0});
  CHECK(min_right[1] == std::vector<int>{1});
  CHECK(center(s).empty());
  CHECK(rees_checks(s).status == "pass");
  CHECK_THROWS_AS(minidem_correspondence(s), UnsupportedInput);
}

TEST_CASE("left-zero semigroup as constant transformations") {
  auto s = generate_transformation_semigroup({{0, 0}, {1, 1}});
  CHECK(s.size == 2);
  CHECK(idempotents(s).size() == 2);
  auto corr = minidem_correspondence(s);
  CHECK(corr.status == "pass");
  // both constants share the total kernel partition, images differ
  CHECK(corr.certificates["kernel_classes"] == 1);
  CHECK(corr.certificates["image_classes"] == 2);
  CHECK(corr.certificates["minimal_idempotents"] == 2);
}

TEST_CASE("cyclic group of order five, transformation representation") {
  auto s = generate_transformation_semigroup({{1, 2, 3, 4, 0}});
  CHECK(s.size == 5);
  CHECK(idempotents(s).size() == 1);
  CHECK(minimal_idempotents(s).size() == 1);
  CHECK(center(s).size() == 5);  // abelian
  auto ideals = minimal_ideals(s);
  int min_left = 0;
  for (const auto& r : ideals.left) {
    if (r.minimal) {
      ++min_left;
      CHECK(r.members.size() == 5);  // the whole group
    }
  }
  CHECK(min_left == 1);
  CHECK(rees_checks(s).status == "pass");
  auto corr = minidem_correspondence(s);
  CHECK(corr.status == "pass");
}

TEST_CASE("cyclic group via epsilon-collapsed rotation matrices") {
  auto s = generate_matrix_semigroup({test::rotation2(2.0 * kPi / 5.0)}, 1e-9);
  CHECK(s.size == 5);
  CHECK(idempotents(s).size() == 1);
  CHECK(center(s).size() == 5);
  CHECK(rees_checks(s).status == "pass");
  // all elements invertible: one kernel class, one image class
  auto corr = minidem_correspondence(s);
  CHECK(corr.status == "pass");
  CHECK(corr.certificates["kernel_classes"] == 1);
  CHECK(corr.certificates["image_classes"] == 1);
}

TEST_CASE("nilpotent boolean matrix gives the chain g, g^2, 0") {
  BoolMatrix g{3, {0b010, 0b100, 0b000}};  // strict shift
  auto s = generate_boolean_matrix_semigroup({g});
  CHECK(s.size == 3);
  CHECK(idempotents(s).size() == 1);  // only the zero matrix
  const auto& elems = std::get<std::vector<BoolMatrix>>(s.meta);
  CHECK(elems[2].rows == std::vector<std::uint32_t>{0, 0, 0});
}

TEST_CASE("rank-one boolean matrices, exhaustively generated") {
  // all nine u v^T with u, v in {01, 10, 11}; products are rank one or zero
  std::vector<BoolMatrix> gens;
  const std::vector<std::uint32_t> nonzero = {0b01, 0b10, 0b11};
  for (auto u : nonzero) {
    for (auto v : nonzero) {
      BoolMatrix m{2, {0, 0}};
      for (int i = 0; i < 2; ++i) {
        if (u & (1u << i)) m.rows[static_cast<std::size_t>(i)] = v;
      }
      gens.push_back(m);
    }
  }
  auto s = generate_boolean_matrix_semigroup(gens);
  CHECK(s.size == 10);  // nine rank-one matrices plus zero

  // oracle: u v^T is idempotent iff v . u != 0; plus the zero matrix
  int oracle = 1;
  for (auto u : nonzero) {
    for (auto v : nonzero) {
      if ((u & v) != 0) ++oracle;
    }
  }
  CHECK(oracle == 8);
  CHECK(static_cast<int>(idempotents(s).size()) == oracle);

  // zero absorbs, so it is the unique minimal idempotent
  CHECK(minimal_idempotents(s).size() == 1);
  CHECK(rees_checks(s).status == "pass");
  auto corr = minidem_correspondence(s);
  CHECK(corr.status == "pass");
  CHECK(corr.certificates["minimal_idempotents"] == 1);
}

TEST_CASE("boolean left-zero family has a nontrivial correspondence") {
  // u 11^T for u in {01, 10, 11}: products collapse to the left factor
  std::vector<BoolMatrix> gens;
  for (std::uint32_t u : {0b01u, 0b10u, 0b11u}) {
    BoolMatrix m{2, {0, 0}};
    for (int i = 0; i < 2; ++i) {
      if (u & (1u << i)) m.rows[static_cast<std::size_t>(i)] = 0b11;
    }
    gens.push_back(m);
  }
  auto s = generate_boolean_matrix_semigroup(gens);
  CHECK(s.size == 3);
  CHECK(idempotents(s).size() == 3);
  auto corr = minidem_correspondence(s);
  CHECK(corr.status == "pass");
  CHECK(corr.certificates["kernel_classes"] == 1);  // common row space
  CHECK(corr.certificates["image_classes"] == 3);   // three column spaces
  CHECK(corr.certificates["minimal_idempotents"] == 3);
}

TEST_CASE("every generated semigroup has an idempotent and power cycles") {
  std::vector<FiniteSemigroup> instances;
  instances.push_back(
      generate_transformation_semigroup({{1, 2, 0}, {0, 0, 0}}));
  instances.push_back(generate_transformation_semigroup({{1, 0}, {0, 0}}));
  instances.push_back(
      generate_matrix_semigroup({test::rotation2(2.0 * kPi / 3.0)}, 1e-9));
  instances.push_back(from_cayley_table({{0, 0}, {1, 1}}));
  for (const auto& s : instances) {
    const auto es = idempotents(s);
    CHECK(!es.empty());
    // the idempotent powers of the elements enumerate exactly the idempotents
    std::set<int> from_powers;
    for (int a = 0; a < s.size; ++a) {
      const int e = idempotent_power(s, a);
      CHECK(s.product(e, e) == e);
      from_powers.insert(e);
    }
    for (int e : es) CHECK(from_powers.count(e) == 1);
    CHECK(from_powers.size() == es.size());
    // order relation is reflexive, antisymmetric, transitive
    const auto order = idempotent_order(s);
    std::set<std::pair<int, int>> rel(order.begin(), order.end());
    for (int e : es) CHECK(rel.count({e, e}) == 1);
    for (const auto& [p, q] : rel) {
      if (rel.count({q, p})) CHECK(p == q);
      for (int r : es) {
        if (rel.count({q, r})) CHECK(rel.count({p, r}) == 1);
      }
    }
    // every minimal left ideal contains a minimal idempotent
    const auto min_idem = minimal_idempotents(s);
    for (const auto& record : minimal_ideals(s).left) {
      if (!record.minimal) continue;
      bool found = false;
      for (int e : min_idem) {
        if (std::binary_search(record.members.begin(), record.members.end(),
                               e)) {
          found = true;
          break;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(generate_transformation_semigroup({{0, 5}}), InvalidInput);
  CHECK_THROWS_AS(generate_transformation_semigroup({}), InvalidInput);
  CHECK_THROWS_AS(from_cayley_table({{0, 1}, {0}}), InvalidInput);
  CHECK_THROWS_AS(from_cayley_table({{2, 0}, {0, 1}}), InvalidInput);
  CHECK_THROWS_AS(from_cayley_table({{1, 1}, {0, 1}}), CollapseTooCoarse);
  // closure cap
  CHECK_THROWS_AS(
      generate_transformation_semigroup({{1, 2, 0}, {1, 0, 2}, {0, 0, 2}}, 10),
      CapExceeded);
}

TEST_CASE("epsilon collapse detects coarse nets") {
  // contracting scalar: powers accumulate and products of the kept
  // representatives fall between the mesh points
  CMatrix scalar(1, 1);
  scalar << 0.9;
  CHECK_THROWS_AS(generate_matrix_semigroup({scalar}, 0.05),
                  CollapseTooCoarse);
}
