#include "koehler/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace koehler {

namespace {

bool all_finite(const CMatrix& m) {
  return m.allFinite();
}

}  // namespace

OperatorMatrix::OperatorMatrix(CMatrix entries, double tol, ValidateTag)
    : entries_(std::move(entries)), tol_(tol) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw InvalidInput("operator matrix must be square with dim >= 1");
  }
  if (!all_finite(entries_)) {
    throw InvalidInput("operator matrix entries must be finite");
  }
  if (!(tol_ > 0.0) || !(tol_ < 1e-2)) {
    throw InvalidInput("operator tolerance must lie in (0, 1e-2)");
  }
  norm_ = entries_.norm();
}

OperatorMatrix OperatorMatrix::identity(Eigen::Index n, double tol) {
  return OperatorMatrix(CMatrix::Identity(n, n), tol);
}

namespace {

// Single-linkage clustering of eigenvalues at sqrt(tol) * scale; the sqrt
// absorbs the eigenvalue splitting a defective cluster suffers under
// machine-precision perturbation.
std::vector<std::vector<int>> cluster_eigenvalues(const CVector& values,
                                                  double cluster_tol) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= cluster_tol) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& g : groups) {
    if (!g.empty()) out.push_back(std::move(g));
  }
  return out;
}

int numerical_rank(const CMatrix& m, double threshold) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const RVector& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > threshold) ++rank;
  }
  return rank;
}

}  // namespace

EigenDecomposition eigen_decompose(const OperatorMatrix& T) {
  const Eigen::Index n = T.dim();
  Eigen::ComplexEigenSolver<CMatrix> solver(T.entries(), true);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigensolver did not converge within its sweep cap");
  }
  Eigen::ComplexSchur<CMatrix> schur(T.entries(), true);
  if (schur.info() != Eigen::Success) {
    throw ConvergenceError("Schur reduction did not converge");
  }

  EigenDecomposition out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.schur_t = schur.matrixT();
  out.schur_u = schur.matrixU();

  out.residuals.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.residuals[i] =
        (T.entries() * out.vectors.col(i) - out.values[i] * out.vectors.col(i))
            .norm();
    if (out.residuals[i] > T.tol() * std::max(T.norm(), 1.0)) {
      std::ostringstream msg;
      msg << "eigenpair residual " << out.residuals[i]
          << " exceeds tol * ||T|| = " << T.tol() * std::max(T.norm(), 1.0);
      throw ConvergenceError(msg.str());
    }
  }

  double radius = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    radius = std::max(radius, std::abs(out.values[i]));
  }
  out.spectrum.spectral_radius = radius;

  const double scale = std::max(1.0, radius);
  const double cluster_tol = std::sqrt(T.tol()) * scale;
  const double rank_tol = T.tol() * std::max(T.norm(), 1.0);
  for (const auto& group : cluster_eigenvalues(out.values, cluster_tol)) {
    Complex mean = 0.0;
    for (int idx : group) mean += out.values[idx];
    mean /= static_cast<double>(group.size());
    const int alg_mult = static_cast<int>(group.size());
    const CMatrix shifted =
        T.entries() - mean * CMatrix::Identity(n, n);
    const int geo_mult = static_cast<int>(n) - numerical_rank(shifted, rank_tol);
    out.spectrum.eigenvalues.push_back(
        {mean, alg_mult, geo_mult >= alg_mult});
  }
  std::sort(out.spectrum.eigenvalues.begin(), out.spectrum.eigenvalues.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) {
              const double ma = std::abs(a.value), mb = std::abs(b.value);
              if (ma != mb) return ma > mb;
              return std::arg(a.value) < std::arg(b.value);
            });
  return out;
}

PowerBoundCheck is_power_bounded(const OperatorMatrix& T, int probe_horizon) {
  if (probe_horizon < 1) throw InvalidInput("probe horizon must be >= 1");
  const EigenDecomposition ed = eigen_decompose(T);

  PowerBoundCheck out;
  out.spectral_radius = ed.spectrum.spectral_radius;
  out.power_bounded = out.spectral_radius <= 1.0 + T.tol();
  for (const auto& e : ed.spectrum.eigenvalues) {
    if (std::abs(e.value) >= 1.0 - T.tol() && !e.peripheral_semisimple) {
      out.power_bounded = false;
      out.defective_unimodular.push_back(e.value);
    }
  }

  CMatrix power = T.entries();
  out.bound_estimate = power.norm();
  for (int k = 2; k <= probe_horizon; ++k) {
    power = power * T.entries();
    const double nrm = power.norm();
    out.bound_estimate = std::max(out.bound_estimate, nrm);
    if (nrm > 1e150) break;  // clearly unbounded; avoid overflow
  }
  return out;
}

SubspaceBasis::SubspaceBasis(CMatrix vectors, double tol)
    : vectors_(std::move(vectors)) {
  const Eigen::Index k = vectors_.cols();
  if (k > vectors_.rows()) {
    throw InvalidInput("subspace basis has more vectors than ambient dim");
  }
  if (k > 0) {
    const CMatrix gram = vectors_.adjoint() * vectors_;
    const double defect =
        (gram - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
    if (defect > std::max(tol, 1e-12)) {
      throw InvalidInput("subspace basis is not orthonormal within tol");
    }
  }
}

namespace detail {

namespace {

// Unitary similarity on rows/cols (k, k+1) exchanging the two diagonal
// entries of an upper-triangular S; requires the entries to be distinct.
void swap_adjacent(CMatrix& s, CMatrix& u, Eigen::Index k) {
  const Eigen::Index n = s.rows();
  const Complex a = s(k, k);
  const Complex b = s(k, k + 1);
  const Complex d = s(k + 1, k + 1);

  // Unit eigenvector of [[a, b], [0, d]] for eigenvalue d.
  Complex x1 = b;
  Complex x2 = d - a;
  const double nrm = std::sqrt(std::norm(x1) + std::norm(x2));
  if (nrm == 0.0) return;  // equal eigenvalues, nothing to exchange
  x1 /= nrm;
  x2 /= nrm;

  Eigen::Matrix2cd g;
  g << x1, -std::conj(x2), x2, std::conj(x1);

  s.block(k, 0, 2, n) = (g.adjoint() * s.block(k, 0, 2, n)).eval();
  s.block(0, k, n, 2) = (s.block(0, k, n, 2) * g).eval();
  u.block(0, k, n, 2) = (u.block(0, k, n, 2) * g).eval();
  s(k + 1, k) = 0.0;
}

}  // namespace

void reorder_schur(CMatrix& s, CMatrix& u, std::vector<bool> select) {
  const Eigen::Index n = s.rows();
  Eigen::Index top = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!select[static_cast<std::size_t>(i)]) continue;
    for (Eigen::Index k = i; k > top; --k) {
      swap_adjacent(s, u, k - 1);
      std::swap(select[static_cast<std::size_t>(k - 1)],
                select[static_cast<std::size_t>(k)]);
    }
    ++top;
  }
}

CMatrix solve_triangular_sylvester(const CMatrix& a, const CMatrix& b,
                                   const CMatrix& c) {
  const Eigen::Index k = a.rows();
  const Eigen::Index m = b.rows();
  CMatrix r(k, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    CVector rhs = c.col(j);
    for (Eigen::Index i = 0; i < j; ++i) rhs += b(i, j) * r.col(i);
    CMatrix shifted = a;
    shifted.diagonal().array() -= b(j, j);
    r.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return r;
}

}  // namespace detail

InvariantSplit invariant_split(const OperatorMatrix& T,
                               const EigenvaluePredicate& pred) {
  const Eigen::Index n = T.dim();
  Eigen::ComplexSchur<CMatrix> schur(T.entries(), true);
  if (schur.info() != Eigen::Success) {
    throw ConvergenceError("Schur reduction did not converge");
  }
  CMatrix s = schur.matrixT();
  CMatrix u = schur.matrixU();

  std::vector<bool> select(static_cast<std::size_t>(n));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    select[static_cast<std::size_t>(i)] = pred(s(i, i));
    if (select[static_cast<std::size_t>(i)]) ++k;
  }

  double radius = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    radius = std::max(radius, std::abs(s(i, i)));
  }

  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (select[static_cast<std::size_t>(i)] &&
          !select[static_cast<std::size_t>(j)]) {
        gap = std::min(gap, std::abs(s(i, i) - s(j, j)));
      }
    }
  }
  const double gap_threshold = 1e4 * T.tol() * (1.0 + radius);
  if (k > 0 && k < n && gap <= gap_threshold) {
    std::ostringstream msg;
    msg << "eigenvalue groups separated by gap " << gap
        << " below split threshold " << gap_threshold;
    throw IllConditionedSplit(msg.str(), gap);
  }

  CMatrix projector;
  CMatrix sel_vectors;
  CMatrix com_vectors;
  if (k == 0) {
    projector = CMatrix::Zero(n, n);
    sel_vectors = CMatrix::Zero(n, 0);
    com_vectors = CMatrix::Identity(n, n);
  } else if (k == n) {
    projector = CMatrix::Identity(n, n);
    sel_vectors = CMatrix::Identity(n, n);
    com_vectors = CMatrix::Zero(n, 0);
  } else {
    detail::reorder_schur(s, u, select);
    const Eigen::Index m = n - k;
    const CMatrix a11 = s.topLeftCorner(k, k);
    const CMatrix a22 = s.bottomRightCorner(m, m);
    const CMatrix a12 = s.topRightCorner(k, m);
    const CMatrix r = detail::solve_triangular_sylvester(a11, a22, a12);

    CMatrix block = CMatrix::Zero(n, n);
    block.topLeftCorner(k, k) = CMatrix::Identity(k, k);
    block.topRightCorner(k, m) = r;
    projector = u * block * u.adjoint();

    sel_vectors = u.leftCols(k);
    CMatrix w(n, m);
    w = u.rightCols(m) - u.leftCols(k) * r;
    Eigen::HouseholderQR<CMatrix> qr(w);
    com_vectors = qr.householderQ() * CMatrix::Identity(n, m);
  }

  const double basis_tol = T.tol() * (1.0 + T.norm());
  for (const CMatrix* basis : {&sel_vectors, &com_vectors}) {
    if (basis->cols() == 0) continue;
    const CMatrix image = T.entries() * (*basis);
    const double res = (image - (*basis) * (basis->adjoint() * image)).norm();
    if (res > basis_tol) {
      throw InternalError("invariant subspace residual exceeds tolerance");
    }
  }

  InvariantSplit out{SubspaceBasis(sel_vectors, T.tol()),
                     SubspaceBasis(com_vectors, T.tol()),
                     projector,
                     gap,
                     0.0};
  const CMatrix ident = CMatrix::Identity(n, n);
  out.projector_residual =
      ((ident - projector) * T.entries() * projector).norm();
  return out;
}

}  // namespace koehler
