#ifndef KOEHLER_ENGINE_HPP_
#define KOEHLER_ENGINE_HPP_

#include <optional>
#include <vector>

#include "koehler/linalg.hpp"

namespace koehler {

/// Epsilon-net approximation of the closure of the power orbit {T^n}.
/// Every probed power lies within `epsilon` (Frobenius) of its
/// representative and representatives are pairwise >= epsilon/2 apart.
struct SemigroupApprox {
  OperatorMatrix base;
  int horizon = 0;
  double epsilon = 0.0;
  std::vector<CMatrix> representatives;
  std::vector<int> first_power;  // power index that created each representative
  std::vector<int> index_of;     // index_of[n-1] = representative of T^n
};

struct ProductClosureEntry {
  int rep_a = 0;
  int rep_b = 0;
  int power_index = 0;  // first_power[rep_a] + first_power[rep_b]
  double distance = 0.0;
};

struct ProductClosureReport {
  double threshold = 0.0;  // 3 * epsilon
  double max_distance = 0.0;
  std::vector<ProductClosureEntry> violations;
  bool pass() const { return violations.empty(); }
};

struct OrbitClosureOptions {
  int net_cap = 4096;
  bool with_product_report = true;
};

struct OrbitClosure {
  SemigroupApprox net;
  ProductClosureReport product_report;
};

/// Collapses {T^n : 1 <= n <= horizon} onto an epsilon-net (greedy, first
/// representative within epsilon/2 wins; deterministic).
OrbitClosure orbit_closure(const OperatorMatrix& T, int horizon,
                           double epsilon,
                           const OrbitClosureOptions& options = {});

/// Certified idempotent in the orbit closure.
struct ProjectionMatrix {
  CMatrix matrix;
  double idempotency_residual = 0.0;  // ||P^2 - P||_F
  double commutation_residual = 0.0;  // ||PT - TP||_F
  bool spectral_witness = false;
  std::vector<long long> witness_indices;  // doubling sequence, if dynamical
};

/// Builds a ProjectionMatrix and enforces the certificate bounds
/// ||P^2-P|| <= 1e-8 (1 + ||P||_F) and ||PT-TP|| <= 1e-8 (1 + ||P||_F ||T||_F).
ProjectionMatrix certify_projection(CMatrix p, const OperatorMatrix& T,
                                    bool spectral_witness,
                                    std::vector<long long> witness_indices);

/// Spectral construction: oblique projector onto the sum of the unimodular
/// eigenspaces along the complementary invariant subspace.
ProjectionMatrix minimal_idempotent_spectral(const OperatorMatrix& T);

// Refinement starts only below this bound on ||Q^2 - Q||_F; the cubic
// iteration Q <- 3Q^2 - 2Q^3 then contracts the residual monotonically.
inline constexpr double kPurificationBasin = 0.1;

/// Dynamical construction: nearest-to-idempotent power T^n (n <= horizon,
/// minimizing ||T^{2n} - T^n||_F, smallest minimizer wins), purified by the
/// cubic iteration.
ProjectionMatrix minimal_idempotent_dynamical(const OperatorMatrix& T,
                                              int horizon);

/// Inverse of T on im P: first m <= horizon with ||T^m P - P||_F below the
/// return threshold yields J = T^{m-1} P. Posts ||TJ-P||, ||JT-P|| <= 1e-6
/// and JP = PJ = J within 1e-8 are verified before returning.
CMatrix inverse_on_rev(const OperatorMatrix& T, const ProjectionMatrix& P,
                       int horizon);

/// Cross-check route: invert T restricted to an orthonormal basis of im P.
CMatrix inverse_on_rev_direct(const OperatorMatrix& T,
                              const ProjectionMatrix& P);

struct CommutationReport {
  double threshold = 0.0;  // 3 * epsilon * ||T||_F
  std::vector<double> residuals;  // ||R T - T R||_F per representative
  double max_residual = 0.0;
  bool pass() const { return max_residual <= threshold; }
};

/// Residuals ||RT - TR||_F over the net representatives; all must stay below
/// 3 * epsilon * ||T||_F.
CommutationReport commutation_report(const SemigroupApprox& s);

}  // namespace koehler

#endif  // KOEHLER_ENGINE_HPP_
