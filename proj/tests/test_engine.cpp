#include "koehler/engine.hpp"

#include <cmath>

#include "doctest.h"
#include "koehler/rng.hpp"
#include "test_helpers.hpp"

using namespace koehler;
using namespace koehler::test;

namespace {
const double kPi = std::acos(-1.0);
const Complex kI(0.0, 1.0);

OperatorMatrix mixed_conjugated_fixture(int n, std::uint64_t seed) {
  Rng rng(seed);
  CMatrix d = CMatrix::Zero(n, n);
  d(0, 0) = 1.0;
  d(1, 1) = std::polar(1.0, 2.0 * kPi / 3.0);
  for (int i = 2; i < n; ++i) {
    d(i, i) = rng.uniform(0.2, 0.7) * rng.unit_complex();
  }
  const CMatrix s = random_similarity(n, 8.0, rng);
  return OperatorMatrix(s * d * s.inverse());
}
}  // namespace

TEST_CASE("orbit_closure of a nilpotent shift") {
  OperatorMatrix t(nilpotent_shift(3));
  auto oc = orbit_closure(t, 10, 1e-6);
  REQUIRE(oc.net.representatives.size() == 3);
  CHECK((oc.net.representatives[0] - t.entries()).norm() == 0.0);
  CHECK((oc.net.representatives[1] - t.entries() * t.entries()).norm() == 0.0);
  CHECK(oc.net.representatives[2].norm() == 0.0);
  // all later powers collapse onto the zero representative
  for (int n = 3; n <= 10; ++n) CHECK(oc.net.index_of[n - 1] == 2);
  CHECK(oc.product_report.pass());
}

TEST_CASE("orbit_closure of an idempotent diagonal") {
  OperatorMatrix t(diag({1.0, 0.0}));
  auto oc = orbit_closure(t, 20, 1e-6);
  REQUIRE(oc.net.representatives.size() == 1);
  CHECK((oc.net.representatives[0] - t.entries()).norm() == 0.0);
}

TEST_CASE("orbit_closure of the 2pi/5 rotation is the cyclic group") {
  OperatorMatrix t(rotation2(2.0 * kPi / 5.0));
  auto oc = orbit_closure(t, 50, 1e-6);
  REQUIRE(oc.net.representatives.size() == 5);
  // oracle: the five rotation matrices by 2*pi*k/5
  for (int k = 1; k <= 5; ++k) {
    const CMatrix expected = rotation2(2.0 * kPi * k / 5.0);
    double best = 1e9;
    for (const auto& rep : oc.net.representatives) {
      best = std::min(best, (rep - expected).norm());
    }
    CHECK(best < 1e-12);
  }
  CHECK(oc.product_report.pass());
  CHECK(oc.product_report.max_distance < 1e-12);
}

TEST_CASE("orbit_closure net invariants") {
  auto t = mixed_conjugated_fixture(5, 33);
  const double epsilon = 1e-4;
  auto oc = orbit_closure(t, 200, epsilon);
  // every probed power within epsilon of its representative
  CMatrix power = t.entries();
  for (int n = 1; n <= 200; ++n) {
    if (n > 1) power = power * t.entries();
    const int idx = oc.net.index_of[n - 1];
    CHECK((power - oc.net.representatives[idx]).norm() <= epsilon);
  }
  // representatives pairwise >= epsilon / 2 apart
  for (std::size_t a = 0; a < oc.net.representatives.size(); ++a) {
    for (std::size_t b = a + 1; b < oc.net.representatives.size(); ++b) {
      CHECK((oc.net.representatives[a] - oc.net.representatives[b]).norm() >=
            epsilon / 2.0);
    }
  }
}

TEST_CASE("orbit_closure rejects non-power-bounded input") {
  CMatrix j(2, 2);
  j << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(orbit_closure(OperatorMatrix(j), 10, 1e-6), InvalidInput);
}

TEST_CASE("orbit_closure net cap") {
  OperatorMatrix t(rotation2(2.0 * kPi / 5.0));
  OrbitClosureOptions options;
  options.net_cap = 3;
  CHECK_THROWS_AS(orbit_closure(t, 50, 1e-6, options), CapExceeded);
}

TEST_CASE("minimal_idempotent_spectral on identity") {
  auto p = minimal_idempotent_spectral(OperatorMatrix::identity(3));
  CHECK((p.matrix - CMatrix::Identity(3, 3)).norm() < 1e-12);
  CHECK(p.spectral_witness);
}

TEST_CASE("minimal_idempotent_spectral on a diagonal") {
  auto p = minimal_idempotent_spectral(
      OperatorMatrix(diag({0.5, std::polar(1.0, 2.0 * kPi / 3.0)})));
  CMatrix expected = diag({0.0, 1.0});
  CHECK((p.matrix - expected).norm() < 1e-10);
}

TEST_CASE("minimal_idempotent_spectral commutes with conjugation") {
  Rng rng(11);
  const CMatrix s = random_similarity(2, 6.0, rng);
  const CMatrix d = diag({0.5, std::polar(1.0, 2.0 * kPi / 3.0)});
  OperatorMatrix t(s * d * s.inverse());
  auto p = minimal_idempotent_spectral(t);
  const CMatrix expected = s * diag({0.0, 1.0}) * s.inverse();
  CHECK((p.matrix - expected).norm() < 1e-9);
}

TEST_CASE("minimal_idempotent_dynamical on diag(1, 0.5)") {
  auto p = minimal_idempotent_dynamical(OperatorMatrix(diag({1.0, 0.5})), 64);
  CHECK((p.matrix - diag({1.0, 0.0})).norm() < 1e-10);
  CHECK_FALSE(p.spectral_witness);
  REQUIRE(!p.witness_indices.empty());
  // doubling sequence
  for (std::size_t k = 1; k < p.witness_indices.size(); ++k) {
    CHECK(p.witness_indices[k] == 2 * p.witness_indices[k - 1]);
  }
}

TEST_CASE("minimal_idempotent_dynamical on the period-5 rotation") {
  auto p = minimal_idempotent_dynamical(
      OperatorMatrix(rotation2(2.0 * kPi / 5.0)), 50);
  CHECK((p.matrix - CMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(p.witness_indices[0] == 5);  // T^5 = I, exact near-return
}

TEST_CASE("minimal_idempotent_dynamical on a nilpotent shift") {
  auto p = minimal_idempotent_dynamical(OperatorMatrix(nilpotent_shift(3)), 10);
  CHECK(p.matrix.norm() == 0.0);
  CHECK(p.witness_indices[0] == 3);  // first n with T^n = 0
}

TEST_CASE("minimal_idempotent_dynamical horizon error") {
  OperatorMatrix t(rotation2(2.0 * kPi / 5.0));
  CHECK_THROWS_AS(minimal_idempotent_dynamical(t, 4), HorizonError);
}

TEST_CASE("spectral and dynamical idempotents agree") {
  std::vector<OperatorMatrix> fixtures = {
      OperatorMatrix::identity(3),
      OperatorMatrix(diag({1.0, 0.5})),
      OperatorMatrix(rotation2(2.0 * kPi / 5.0)),
      mixed_conjugated_fixture(5, 17),
      mixed_conjugated_fixture(6, 99),
  };
  for (const auto& t : fixtures) {
    auto ps = minimal_idempotent_spectral(t);
    auto pd = minimal_idempotent_dynamical(t, 2048);
    CHECK((ps.matrix - pd.matrix).norm() <=
          1e-6 * static_cast<double>(t.dim()));
  }
}

TEST_CASE("certified idempotents lie in the orbit closure net") {
  // rotation fixture: P = I is hit exactly by T^5
  {
    OperatorMatrix t(rotation2(2.0 * kPi / 5.0));
    auto oc = orbit_closure(t, 50, 1e-6);
    auto p = minimal_idempotent_spectral(t);
    double best = 1e9;
    for (const auto& rep : oc.net.representatives) {
      best = std::min(best, (rep - p.matrix).norm());
    }
    CHECK(best <= 2e-6);
  }
  // diagonal fixture: powers converge to P
  {
    OperatorMatrix t(diag({1.0, 0.5}));
    auto oc = orbit_closure(t, 60, 1e-6);
    auto p = minimal_idempotent_spectral(t);
    double best = 1e9;
    for (const auto& rep : oc.net.representatives) {
      best = std::min(best, (rep - p.matrix).norm());
    }
    CHECK(best <= 2e-6);
  }
}

TEST_CASE("purification residual decreases strictly inside the basin") {
  CMatrix q = diag({1.0, 0.05, 0.02});  // residual ~ 0.05, inside basin
  double residual = (q * q - q).norm();
  CHECK(residual < kPurificationBasin);
  int steps = 0;
  while (residual > 1e-13) {
    const CMatrix q2 = q * q;
    q = 3.0 * q2 - 2.0 * (q2 * q);
    const double next = (q * q - q).norm();
    CHECK(next < residual);
    residual = next;
    REQUIRE(++steps < 50);
  }
}

TEST_CASE("inverse_on_rev on the rotation gives the reverse rotation") {
  OperatorMatrix t(rotation2(2.0 * kPi / 5.0));
  auto p = minimal_idempotent_spectral(t);
  const CMatrix j = inverse_on_rev(t, p, 50);
  CHECK((j - rotation2(-2.0 * kPi / 5.0)).norm() < 1e-10);
  CHECK((j - inverse_on_rev_direct(t, p)).norm() < 1e-10);
}

TEST_CASE("inverse_on_rev on identity") {
  OperatorMatrix t = OperatorMatrix::identity(3);
  auto p = minimal_idempotent_spectral(t);
  const CMatrix j = inverse_on_rev(t, p, 10);
  CHECK((j - CMatrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("inverse_on_rev on a mixed diagonal") {
  OperatorMatrix t(diag({std::polar(1.0, kPi / 2.0), 0.3}));
  auto p = minimal_idempotent_spectral(t);
  const CMatrix j = inverse_on_rev(t, p, 50);
  const CMatrix expected = diag({std::polar(1.0, -kPi / 2.0), 0.0});
  CHECK((j - expected).norm() < 1e-10);
  CHECK((j - inverse_on_rev_direct(t, p)).norm() < 1e-10);
}

TEST_CASE("inverse_on_rev handles the zero projection") {
  OperatorMatrix t(nilpotent_shift(3));
  auto p = minimal_idempotent_dynamical(t, 10);
  const CMatrix j = inverse_on_rev(t, p, 10);
  CHECK(j.norm() == 0.0);
}

TEST_CASE("inverse_on_rev horizon error") {
  // order-12 rotation needs m = 12 to return
  OperatorMatrix t(rotation2(2.0 * kPi / 12.0));
  auto p = minimal_idempotent_spectral(t);
  CHECK_THROWS_AS(inverse_on_rev(t, p, 8), HorizonError);
}

TEST_CASE("commutation_report") {
  SUBCASE("diagonal operator commutes exactly") {
    auto oc = orbit_closure(OperatorMatrix(diag({0.9, 0.4})), 30, 1e-6);
    auto report = commutation_report(oc.net);
    CHECK(report.max_residual == 0.0);
    CHECK(report.pass());
  }
  SUBCASE("rotation powers commute with the rotation") {
    auto oc =
        orbit_closure(OperatorMatrix(rotation2(2.0 * kPi / 5.0)), 50, 1e-6);
    auto report = commutation_report(oc.net);
    CHECK(report.max_residual < 1e-12);
    CHECK(report.pass());
  }
  SUBCASE("random power-bounded fixture stays below 3 eps ||T||") {
    auto t = mixed_conjugated_fixture(4, 55);
    auto oc = orbit_closure(t, 300, 1e-4);
    auto report = commutation_report(oc.net);
    CHECK(report.pass());
  }
}

TEST_CASE("irrational rotation stress (documented, no acceptance claim)") {
  // Golden-ratio angle: near-returns happen along the continued-fraction
  // denominators (Fibonacci numbers), so the basin is first reached at
  // n = 55 within a horizon of 100. Both constructions still agree on P = I.
  const double golden = 0.6180339887498949;
  OperatorMatrix t(rotation2(2.0 * kPi * golden));
  auto ps = minimal_idempotent_spectral(t);
  CHECK((ps.matrix - CMatrix::Identity(2, 2)).norm() < 1e-10);
  auto pd = minimal_idempotent_dynamical(t, 100);
  CHECK((ps.matrix - pd.matrix).norm() <= 2e-6);
  CHECK(pd.witness_indices[0] >= 34);  // no earlier power enters the basin
  // far too small a horizon cannot reach the basin
  CHECK_THROWS_AS(minimal_idempotent_dynamical(t, 20), HorizonError);
}

TEST_CASE("projection certificates populated") {
  auto t = mixed_conjugated_fixture(5, 3);
  auto p = minimal_idempotent_spectral(t);
  CHECK(p.idempotency_residual <= 1e-8 * (1.0 + p.matrix.norm()));
  CHECK(p.commutation_residual <=
        1e-8 * (1.0 + p.matrix.norm() * t.norm()));
  CHECK((p.matrix * t.entries() - t.entries() * p.matrix).norm() <=
        1e-8 * (1.0 + p.matrix.norm() * t.norm()));
}
