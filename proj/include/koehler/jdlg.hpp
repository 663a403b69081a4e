#ifndef KOEHLER_JDLG_HPP_
#define KOEHLER_JDLG_HPP_

#include <vector>

#include "koehler/engine.hpp"
#include "koehler/linalg.hpp"
#include "koehler/report.hpp"

namespace koehler {

/// E = E_rev + E_aws split induced by a certified idempotent: im P carries
/// the invertible restriction of T, ker P the stable part.
struct Decomposition {
  ProjectionMatrix projection;
  SubspaceBasis rev_basis;   // orthonormal basis of im P
  SubspaceBasis aws_basis;   // orthonormal basis of ker P
  CMatrix t_rev;             // T restricted to im P in rev_basis coordinates
  CMatrix t_rev_inverse;
  double tol = kDefaultTol;
};

/// Extracts both subspaces from the SVD of P (rank cut at the largest
/// log-gap of the singular values) and inverts the restriction of T.
/// Throws when the singular values sit too close to the rank threshold.
Decomposition decompose(const OperatorMatrix& T, const ProjectionMatrix& P);

/// Residuals ||(I-P) T P|| and ||P T (I-P)|| against 1e-8 ||T||_F; when a
/// net is supplied every representative is checked at the net tolerance.
CheckBlock verify_invariance(const Decomposition& d, const OperatorMatrix& T,
                             const SemigroupApprox* net = nullptr);

/// Every eigenvector for an eigenvalue with |lambda| >= 1 - tol satisfies
/// ||P v - v|| <= 1e-6 ||v||.
CheckBlock verify_unimodular_eigenvectors(const Decomposition& d,
                                          const OperatorMatrix& T);

/// Stability of ker P: every aws basis vector decays below 1e-6 within the
/// horizon (first such index reported as n0); sampled vectors whose orbit
/// decayed numerically must satisfy ||P x|| <= 1e-6.
///
/// On ker P the spectrum lies strictly inside the unit disk, so "0 is an
/// accumulation point of the orbit" upgrades to convergence here; orbits
/// bounded away from 0 that still accumulate at 0 cannot occur in finite
/// dimension, which is why no such flag is reported.
CheckBlock verify_stability(const Decomposition& d, const OperatorMatrix& T,
                            int horizon, std::uint64_t sample_seed = 2024,
                            int sample_count = 8);

/// Recurrence on im P: the return set {n <= horizon : ||T^n x - x|| < eps}
/// of every rev basis vector is nonempty; gaps are reported.
CheckBlock verify_rev_recurrence(const Decomposition& d,
                                 const OperatorMatrix& T, double epsilon,
                                 int horizon);

}  // namespace koehler

#endif  // KOEHLER_JDLG_HPP_
