#ifndef KOEHLER_BATTERY_HPP_
#define KOEHLER_BATTERY_HPP_

#include <cstdint>

#include "koehler/report.hpp"

namespace koehler {

/// Knobs for the verification battery; defaults match the acceptance
/// criteria. `tol`, `epsilon` and `horizon` track the KOEHLER_TOL,
/// KOEHLER_EPSILON and KOEHLER_HORIZON environment overrides.
struct BatteryOptions {
  std::uint64_t seed = 7;
  int count = 50;            // fixtures for the idempotent/theorem suites
  int cyclicity_count = 500;  // fixtures for the cyclicity sweep
  double tol = 1e-9;
  double epsilon = 1e-6;
  int horizon = 2048;
};

/// Runs the full battery (idempotent cross-oracle, the three theorem
/// suites, the C(K) mechanism, finite-semigroup exactness, and the IP
/// suite) and reports one block per criterion.
Report run_battery(const BatteryOptions& options = {});

}  // namespace koehler

#endif  // KOEHLER_BATTERY_HPP_
