#ifndef KOEHLER_LATTICE_HPP_
#define KOEHLER_LATTICE_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "koehler/engine.hpp"
#include "koehler/linalg.hpp"
#include "koehler/report.hpp"

namespace koehler {

/// Coordinatewise order of R^n embedded in C^n.
struct ConeOrder {
  Eigen::Index dim = 0;
  double tol_pos = 1e-8;

  void validate() const {
    if (dim < 1) throw InvalidInput("cone order needs dim >= 1");
    if (!(tol_pos > 0.0) || tol_pos > 1e-4) {
      throw InvalidInput("tol_pos must lie in (0, 1e-4]");
    }
  }
};

/// Angles theta in [0, 2pi) with r e^{i theta} in sigma(T); empty for r = 0
/// (nilpotent convention).
struct PeripheralSpectrum {
  double radius = 0.0;
  std::vector<double> angles;
  double tol_r = 0.0;
  double tol_angle = 1e-6;
};

/// Point map phi on {0, ..., k_size-1}; the operator f -> f o phi on C(K).
struct CompositionOperator {
  int k_size = 0;
  std::vector<int> point_map;

  void validate() const;
  RMatrix to_matrix() const;  // row i has a single 1 in column phi(i)
};

/// Checks T >= 0 (precondition) and that P has nonnegative real part and
/// negligible imaginary part.
CheckBlock verify_positive_projection(const OperatorMatrix& T,
                                      const ProjectionMatrix& P,
                                      const ConeOrder& order);

/// Lattice operations induced on im P by a positive projection:
/// sup(x, y) = P (x v y) coordinatewise, inf dually.
struct LatticeOps {
  RMatrix p_real;
  double tol_pos = 1e-8;

  RVector sup(const RVector& x, const RVector& y) const {
    return p_real * x.cwiseMax(y);
  }
  RVector inf(const RVector& x, const RVector& y) const {
    return p_real * x.cwiseMin(y);
  }
  double closure_defect(const RVector& v) const {
    return (p_real * v - v).norm();
  }
};

LatticeOps induced_lattice_ops(const ProjectionMatrix& P,
                               const ConeOrder& order);

/// Commutativity, associativity, idempotency, absorption of sup/inf on
/// seeded sample vectors from im P, each within 1e-8.
CheckBlock verify_lattice_laws(const ProjectionMatrix& P,
                               const ConeOrder& order,
                               std::uint64_t seed = 2024, int samples = 100);

/// T sup(x,y) = sup(Tx, Ty) (and dually) on sampled pairs from im P within
/// 1e-6, plus entrywise positivity of the inverse of T on im P.
CheckBlock verify_lattice_isomorphism(const OperatorMatrix& T,
                                      const ProjectionMatrix& P,
                                      const ConeOrder& order,
                                      std::uint64_t seed = 2024,
                                      int samples = 100,
                                      int inverse_horizon = 4096);

/// Peripheral part of the spectrum; tol_r < 0 selects 1e-8 * (1 + r).
PeripheralSpectrum peripheral_spectrum(const OperatorMatrix& T,
                                       double tol_r = -1.0,
                                       double tol_angle = 1e-6);

// In finite dimension the peripheral spectrum already consists of
// eigenvalues, so the cyclicity pipeline reduces to restricting T to its
// reversible part; the witness produced here is exactly that restriction,
// and sigma_per(T) = sigma_per(T restricted) is what the reports check.

struct CyclicityCertificate {
  bool cyclic = true;
  int k_max = 0;
  std::vector<std::pair<double, int>> violations;  // (theta, k) pairs
};

/// Cyclic iff for every angle theta and k <= k_max, k*theta mod 2pi is again
/// an angle within tol_angle (circular distance).
CyclicityCertificate check_cyclicity(const PeripheralSpectrum& ps, int k_max);

/// Combinatorial Perron-Frobenius prediction for nonnegative T: union over
/// maximal-radius strongly connected components of the h-th roots of unity,
/// h the gcd of the component's directed cycle lengths.
PeripheralSpectrum frobenius_oracle(const OperatorMatrix& T,
                                    double tol_pos = 1e-8,
                                    double tol_angle = 1e-6);

/// Multiplicativity and Markov property of f -> f o phi, plus the power
/// mechanism: for unimodular eigenpairs with |x| constant on the support,
/// x^k is again an eigenvector for lambda^k and lambda^k stays in the
/// spectrum (k <= k_max, default k_max = k_size).
CheckBlock markov_power_mechanism(const CompositionOperator& c, int k_max = 0,
                                  std::uint64_t sample_seed = 2024);

// Graph helpers behind the oracle (exposed for direct testing).
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adjacency);
int component_cycle_gcd(const std::vector<std::vector<int>>& adjacency,
                        const std::vector<int>& component);

/// Spectral radius of a nonnegative matrix: per strongly connected
/// component, Collatz-Wielandt power iteration on A_C + I (relative
/// tolerance 1e-12, cap 10^4 iterations), maximized over components.
double nonneg_spectral_radius(const RMatrix& a, double rel_tol = 1e-12,
                              int max_iter = 10000);

/// Circular set equality within tol (both directions).
bool angle_sets_match(const std::vector<double>& a,
                      const std::vector<double>& b, double tol);

}  // namespace koehler

#endif  // KOEHLER_LATTICE_HPP_
