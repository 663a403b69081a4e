#ifndef KOEHLER_LINALG_HPP_
#define KOEHLER_LINALG_HPP_

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "koehler/errors.hpp"

namespace koehler {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

/// Dense complex operator on C^n with the numerical tolerance every
/// downstream certificate scales from.
class OperatorMatrix {
 public:
  template <typename Derived>
  explicit OperatorMatrix(const Eigen::MatrixBase<Derived>& entries,
                          double tol = kDefaultTol)
      : OperatorMatrix(CMatrix(entries.template cast<Complex>()), tol,
                       ValidateTag{}) {}

  static OperatorMatrix identity(Eigen::Index n, double tol = kDefaultTol);

  Eigen::Index dim() const { return entries_.rows(); }
  const CMatrix& entries() const { return entries_; }
  double tol() const { return tol_; }
  double norm() const { return norm_; }  // Frobenius

 private:
  struct ValidateTag {};
  OperatorMatrix(CMatrix entries, double tol, ValidateTag);

  CMatrix entries_;
  double tol_;
  double norm_;
};

struct SpectrumEntry {
  Complex value;                  // cluster representative
  int algebraic_multiplicity;     // cluster size
  bool peripheral_semisimple;     // geometric == algebraic multiplicity
};

struct Spectrum {
  std::vector<SpectrumEntry> eigenvalues;  // sorted by (|value| desc, arg asc)
  double spectral_radius = 0.0;
};

/// Raw eigen/Schur data next to the clustered spectrum. `values[i]`,
/// `vectors.col(i)` are the unclustered pairs with residual
/// ||T v - lambda v||_2 in `residuals[i]`; T = schur_u * schur_t * schur_u^*.
struct EigenDecomposition {
  Spectrum spectrum;
  CVector values;
  CMatrix vectors;
  RVector residuals;
  CMatrix schur_t;
  CMatrix schur_u;
};

EigenDecomposition eigen_decompose(const OperatorMatrix& T);

struct PowerBoundCheck {
  bool power_bounded = false;
  double bound_estimate = 0.0;  // max_{n <= probe_horizon} ||T^n||_F
  double spectral_radius = 0.0;
  std::vector<Complex> defective_unimodular;  // offending eigenvalues, if any
};

/// Finite-dimensional power-boundedness test: spectral radius <= 1 + tol and
/// every unimodular eigenvalue semisimple (rank test on T - lambda*I).
PowerBoundCheck is_power_bounded(const OperatorMatrix& T,
                                 int probe_horizon = 1000);

/// Orthonormal set of n-vectors (possibly empty, k = 0).
class SubspaceBasis {
 public:
  SubspaceBasis(CMatrix vectors, double tol);

  Eigen::Index dim_ambient() const { return vectors_.rows(); }
  Eigen::Index dim() const { return vectors_.cols(); }
  const CMatrix& vectors() const { return vectors_; }

 private:
  CMatrix vectors_;
};

using EigenvaluePredicate = std::function<bool(const Complex&)>;

struct InvariantSplit {
  SubspaceBasis selected;     // T-invariant span of predicate-true eigenvalues
  SubspaceBasis complement;   // complementary T-invariant subspace
  CMatrix projector;          // oblique projector onto selected along complement
  double gap;                 // min cross-group eigenvalue distance
  double projector_residual;  // ||(I - P) T P||_F
};

/// Separates the spectrum along `pred` into two complementary T-invariant
/// subspaces (Schur reordering, then triangular Sylvester decoupling).
/// Throws IllConditionedSplit when the cross-group eigenvalue gap is below
/// 1e4 * tol * (1 + r(T)).
InvariantSplit invariant_split(const OperatorMatrix& T,
                               const EigenvaluePredicate& pred);

namespace detail {

/// Stable reorder of a complex Schur form T = U S U^*: diagonal entries with
/// select=true are moved to the leading block by adjacent unitary swaps.
void reorder_schur(CMatrix& s, CMatrix& u, std::vector<bool> select);

/// Solves A R - R B = C for upper-triangular A (k x k) and B (m x m).
/// Requires the spectra of A and B to be disjoint.
CMatrix solve_triangular_sylvester(const CMatrix& a, const CMatrix& b,
                                   const CMatrix& c);

}  // namespace detail

}  // namespace koehler

#endif  // KOEHLER_LINALG_HPP_
