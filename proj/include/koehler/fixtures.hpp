#ifndef KOEHLER_FIXTURES_HPP_
#define KOEHLER_FIXTURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "koehler/linalg.hpp"

namespace koehler {

enum class FixtureFamily {
  kCyclicShift,
  kNilpotentShift,
  kRotationContraction,
  kRandomNonnegative,
  kRandomPowerBounded,
};

struct FixtureSpec {
  std::string name;
  FixtureFamily family = FixtureFamily::kCyclicShift;
  int dim = 4;
  // rotation / power-bounded families: unimodular angles 2 pi p / q
  std::vector<std::pair<int, int>> angles;
  std::vector<double> decay_rates;
  std::uint64_t seed = 0;
};

struct FixtureExpectation {
  bool power_bounded = true;
  bool positive = false;
  std::vector<double> peripheral_angles;  // sorted, in [0, 2pi)
  int rev_dim = 0;
  int angle_lcm = 1;  // lcm of the rational angle denominators
};

struct Fixture {
  OperatorMatrix matrix;
  FixtureExpectation expected;
  FixtureSpec spec;
};

/// Deterministic build for the seed; positive-flagged families come out
/// entrywise nonnegative exactly, and the expected metadata is internally
/// consistent (rev_dim = number of unimodular eigenvalues with multiplicity).
Fixture build(const FixtureSpec& spec);

/// Mixed unimodular/contractive conjugated fixture: D = (rational-angle
/// unimodular diagonal) + (strictly contractive part, occasionally a 2x2
/// Jordan block), conjugated by S with cond(S) <= 50.
Fixture random_power_bounded_fixture(int max_dim, std::uint64_t seed);

/// Nonnegative fixture normalized to spectral radius one: a block-cyclic
/// peripheral component (imprimitivity 1..4), optionally a strictly
/// sub-radius component with one-way coupling, or two decoupled maximal
/// components.
Fixture random_nonnegative_fixture(int max_dim, std::uint64_t seed);

/// Named entries for the CLI: list and build-by-name.
std::vector<FixtureSpec> fixture_catalog();
Fixture build_named(const std::string& name, std::uint64_t seed);

}  // namespace koehler

#endif  // KOEHLER_FIXTURES_HPP_
