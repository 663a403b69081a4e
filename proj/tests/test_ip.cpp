#include "koehler/ip.hpp"

#include <cmath>

#include "doctest.h"
#include "koehler/rng.hpp"
#include "test_helpers.hpp"

using namespace koehler;
using namespace koehler::test;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("finite_sums") {
  SUBCASE("three elements enumerate seven sums") {
    const auto fs = finite_sums({1, 3, 9});
    CHECK(fs == std::set<long long>{1, 3, 4, 9, 10, 12, 13});
  }
  SUBCASE("singleton") {
    CHECK(finite_sums({5}) == std::set<long long>{5});
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(finite_sums({1, 1}), InvalidInput);
    CHECK_THROWS_AS(finite_sums({3, 1}), InvalidInput);
    CHECK_THROWS_AS(finite_sums({0, 1}), InvalidInput);
    CHECK_THROWS_AS(finite_sums({}), InvalidInput);
    std::vector<long long> too_long;
    for (long long i = 1; i <= 21; ++i) too_long.push_back(i * 100);
    CHECK_THROWS_AS(finite_sums(too_long), InvalidInput);
  }
}

TEST_CASE("find_fs_sequence") {
  SUBCASE("round trip through finite_sums") {
    const auto fs = finite_sums({1, 3, 9});
    const auto witness = find_fs_sequence(fs, 3, 13);
    REQUIRE(witness.has_value());
    CHECK(witness->sequence == std::vector<long long>{1, 3, 9});
  }
  SUBCASE("lexicographically first witness in an interval") {
    std::set<long long> a;
    for (long long i = 1; i <= 100; ++i) a.insert(i);
    // oracle: brute-force the first valid triple in lexicographic order
    std::vector<long long> first;
    for (long long x1 = 1; x1 <= 100 && first.empty(); ++x1) {
      for (long long x2 = x1 + 1; x2 <= 100 && first.empty(); ++x2) {
        for (long long x3 = x2 + 1; x3 <= 100 && first.empty(); ++x3) {
          const auto fs = finite_sums({x1, x2, x3});
          if (std::all_of(fs.begin(), fs.end(),
                          [&](long long s) { return a.count(s) == 1; })) {
            first = {x1, x2, x3};
          }
        }
      }
    }
    REQUIRE(first == std::vector<long long>{1, 2, 3});
    const auto witness = find_fs_sequence(a, 3, 100);
    REQUIRE(witness.has_value());
    CHECK(witness->sequence == first);
  }
  SUBCASE("absence is a valid result") {
    CHECK_FALSE(find_fs_sequence({1, 2}, 2, 2).has_value());
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(find_fs_sequence({1, 2}, 9, 10), InvalidInput);
    CHECK_THROWS_AS(find_fs_sequence({0, 2}, 2, 10), InvalidInput);
    CHECK_THROWS_AS(find_fs_sequence({1, 20}, 2, 10), InvalidInput);
  }
  SUBCASE("random round-trip property") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<long long> seq;
      long long v = 0;
      const int len = rng.uniform_int(1, 5);
      for (int i = 0; i < len; ++i) {
        v += rng.uniform_int(1, 40);
        seq.push_back(v);
      }
      const auto fs = finite_sums(seq);
      const long long bound = *fs.rbegin();
      const auto witness = find_fs_sequence(fs, len, bound);
      REQUIRE(witness.has_value());
      for (long long s : witness->fs_set) CHECK(fs.count(s) == 1);
    }
  }
  SUBCASE("finite sums of subsets of kN stay inside kN") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      const int k = rng.uniform_int(2, 9);
      std::vector<long long> seq;
      long long v = 0;
      for (int i = 0; i < 4; ++i) {
        v += static_cast<long long>(k) * rng.uniform_int(1, 10);
        seq.push_back(v);
      }
      for (long long s : finite_sums(seq)) CHECK(s % k == 0);
    }
  }
}

TEST_CASE("return_time_set") {
  SUBCASE("rotation by 2pi/5") {
    OperatorMatrix t(rotation2(2.0 * kPi / 5.0));
    CVector x(2);
    x << 1.0, 0.0;
    const auto r = return_time_set(t, x, 1e-6, 23);
    CHECK(r == std::vector<int>{5, 10, 15, 20});
  }
  SUBCASE("identity returns everywhere") {
    OperatorMatrix t = OperatorMatrix::identity(2);
    CVector x(2);
    x << 1.0, 2.0;
    const auto r = return_time_set(t, x, 1e-6, 5);
    CHECK(r == std::vector<int>{1, 2, 3, 4, 5});
  }
  SUBCASE("nilpotent shift never returns") {
    OperatorMatrix t(nilpotent_shift(3));
    CVector x(3);
    x << 1.0, 0.0, 0.0;
    CHECK(return_time_set(t, x, 0.99, 20).empty());
  }
}

TEST_CASE("irrational rotation returns only approximately (documented)") {
  // No exactness claim for irrational angles: the return set under a loose
  // epsilon is nonempty within a Fibonacci-scale horizon, and empty when
  // epsilon is far below the best approximation quality of the window.
  const double golden = 0.6180339887498949;
  OperatorMatrix t(rotation2(2.0 * kPi * golden));
  CVector x(2);
  x << 1.0, 0.0;
  CHECK(!return_time_set(t, x, 0.3, 100).empty());
  CHECK(return_time_set(t, x, 1e-9, 100).empty());
}

TEST_CASE("verify_ip_recurrence") {
  SUBCASE("rotation by 2pi/5") {
    OperatorMatrix t(rotation2(2.0 * kPi / 5.0));
    auto d = decompose(t, minimal_idempotent_spectral(t));
    auto block = verify_ip_recurrence(t, d, 1e-6, 100, 3);
    CHECK(block.status == "pass");
    CHECK(block.certificates["exact_checked"].get<int>() >= 1);
  }
  SUBCASE("identity carries witnesses trivially") {
    OperatorMatrix t = OperatorMatrix::identity(3);
    auto d = decompose(t, minimal_idempotent_spectral(t));
    auto block = verify_ip_recurrence(t, d, 1e-6, 50, 4);
    CHECK(block.status == "pass");
  }
  SUBCASE("order-3 eigenvalue with a contractive companion") {
    OperatorMatrix t(diag({std::polar(1.0, 2.0 * kPi / 3.0), 0.5}));
    auto d = decompose(t, minimal_idempotent_spectral(t));
    auto block = verify_ip_recurrence(t, d, 1e-6, 99, 4);
    CHECK(block.status == "pass");
    // the order-3 eigenvector must return exactly on 3N
    CHECK(block.certificates["exact_checked"].get<int>() >= 1);
    CHECK(block.residuals.at("exact_return_set_failures") == 0.0);
  }
  SUBCASE("horizon too small raises") {
    OperatorMatrix t(rotation2(2.0 * kPi / 5.0));
    auto d = decompose(t, minimal_idempotent_spectral(t));
    CHECK_THROWS_AS(verify_ip_recurrence(t, d, 1e-6, 4, 3), HorizonError);
  }
}
