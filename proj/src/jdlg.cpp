#include "koehler/jdlg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "koehler/rng.hpp"

namespace koehler {

namespace {

// Rank cut at the largest gap of log(sigma), tail clamped near machine zero.
Eigen::Index rank_by_largest_gap(const RVector& sv) {
  const Eigen::Index n = sv.size();
  if (n == 0 || sv[0] <= n * 1e-14) return 0;
  const double floor_value = std::max(sv[0] * 1e-18, 1e-300);
  double best_gap = -1.0;
  Eigen::Index best_k = n;
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double hi = std::max(sv[k - 1], floor_value);
    const double lo = k < n ? std::max(sv[k], floor_value) : floor_value;
    const double gap = std::log(hi) - std::log(lo);
    if (gap > best_gap) {
      best_gap = gap;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace

Decomposition decompose(const OperatorMatrix& T, const ProjectionMatrix& P) {
  const Eigen::Index n = T.dim();
  Eigen::JacobiSVD<CMatrix> svd(P.matrix,
                                Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const Eigen::Index rank = rank_by_largest_gap(sv);

  // Singular values of a certified idempotent sit near {0} or in [1, inf);
  // anything inside the dead band makes the rank cut ambiguous.
  const double band = 10.0 * T.tol();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sv[i] >= band && sv[i] <= 1.0 - band) {
      std::ostringstream msg;
      msg << "singular value " << sv[i]
          << " lies inside the rank dead band [" << band << ", "
          << 1.0 - band << "]; projection rank is ambiguous";
      throw InvalidInput(msg.str());
    }
  }

  Decomposition d{P,
                  SubspaceBasis(svd.matrixU().leftCols(rank), T.tol()),
                  SubspaceBasis(svd.matrixV().rightCols(n - rank), T.tol()),
                  CMatrix(),
                  CMatrix(),
                  T.tol()};

  const CMatrix& v_rev = d.rev_basis.vectors();
  d.t_rev = v_rev.adjoint() * T.entries() * v_rev;
  if (rank > 0) {
    Eigen::FullPivLU<CMatrix> lu(d.t_rev);
    if (!lu.isInvertible()) {
      throw InternalError("restriction of T to im P is singular");
    }
    d.t_rev_inverse = lu.inverse();
  } else {
    d.t_rev_inverse = CMatrix(0, 0);
  }

  // Type invariants.
  const double tol = T.tol();
  if (rank > 0) {
    const double rev_residual =
        (P.matrix * v_rev - v_rev).colwise().norm().maxCoeff();
    if (rev_residual > tol) {
      throw InternalError("P does not fix its own column space within tol");
    }
    const double inverse_residual =
        (d.t_rev * d.t_rev_inverse - CMatrix::Identity(rank, rank)).norm();
    if (inverse_residual > 1e-8) {
      throw InternalError("T_rev inverse residual exceeds 1e-8");
    }
  }
  if (rank < n) {
    const double aws_residual =
        (P.matrix * d.aws_basis.vectors()).colwise().norm().maxCoeff();
    if (aws_residual > tol) {
      throw InternalError("P does not annihilate its kernel within tol");
    }
  }
  return d;
}

CheckBlock verify_invariance(const Decomposition& d, const OperatorMatrix& T,
                             const SemigroupApprox* net) {
  CheckBlock block;
  block.name = "decomposition.invariance";
  const Eigen::Index n = T.dim();
  const CMatrix& p = d.projection.matrix;
  const CMatrix ident = CMatrix::Identity(n, n);
  const double threshold = 1e-8 * T.norm();

  block.record("leak_rev_to_aws", ((ident - p) * T.entries() * p).norm(),
               threshold);
  block.record("leak_aws_to_rev", (p * T.entries() * (ident - p)).norm(),
               threshold);

  if (net != nullptr) {
    const double p_norm = p.norm();
    const double rep_threshold =
        3.0 * net->epsilon * (1.0 + p_norm) * (1.0 + p_norm) + threshold;
    double worst = 0.0;
    for (const CMatrix& r : net->representatives) {
      worst = std::max(worst, ((ident - p) * r * p).norm());
      worst = std::max(worst, (p * r * (ident - p)).norm());
    }
    block.record("max_leak_over_net", worst, rep_threshold);
    block.certificates["net_size"] = net->representatives.size();
  }
  return block;
}

CheckBlock verify_unimodular_eigenvectors(const Decomposition& d,
                                          const OperatorMatrix& T) {
  CheckBlock block;
  block.name = "decomposition.unimodular_eigenvectors";
  const auto ed = eigen_decompose(T);
  const CMatrix& p = d.projection.matrix;
  double worst = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < ed.values.size(); ++i) {
    if (std::abs(ed.values[i]) < 1.0 - T.tol()) continue;
    ++count;
    const CVector v = ed.vectors.col(i);
    worst = std::max(worst, (p * v - v).norm() / v.norm());
  }
  block.record("max_unimodular_eigenvector_defect", worst, 1e-6);
  block.certificates["unimodular_eigenvector_count"] = count;
  return block;
}

CheckBlock verify_stability(const Decomposition& d, const OperatorMatrix& T,
                            int horizon, std::uint64_t sample_seed,
                            int sample_count) {
  if (horizon < 1) throw InvalidInput("stability horizon must be >= 1");
  CheckBlock block;
  block.name = "decomposition.stability";
  const Eigen::Index n = T.dim();
  const Eigen::Index k = d.aws_basis.dim();

  int n0 = 0;
  if (k > 0) {
    CMatrix w = d.aws_basis.vectors();
    std::vector<int> last_above(static_cast<std::size_t>(k), 0);
    for (int step = 1; step <= horizon; ++step) {
      w = T.entries() * w;
      for (Eigen::Index c = 0; c < k; ++c) {
        if (w.col(c).norm() > 1e-6) {
          last_above[static_cast<std::size_t>(c)] = step;
        }
      }
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (w.col(c).norm() > 1e-6) {
        std::ostringstream msg;
        msg << "aws basis vector " << c << " has ||T^" << horizon
            << " w|| = " << w.col(c).norm()
            << " > 1e-6; stability horizon too small";
        throw HorizonError(msg.str());
      }
      n0 = std::max(n0, last_above[static_cast<std::size_t>(c)] + 1);
    }
    // Residual at the reported n0: recompute max over basis at that power.
    CMatrix w2 = d.aws_basis.vectors();
    for (int step = 1; step <= n0; ++step) w2 = T.entries() * w2;
    block.record("max_aws_norm_at_n0", w2.colwise().norm().maxCoeff(), 1e-6);
  } else {
    block.record("max_aws_norm_at_n0", 0.0, 1e-6);
  }
  block.certificates["n0"] = n0;
  block.certificates["aws_dim"] = k;

  // Converse direction on sampled vectors: numerically decayed orbits must
  // start in ker P.
  Rng rng(sample_seed);
  int decayed = 0;
  double worst_p_residual = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    CVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.gaussian_complex();
    x /= x.norm();
    CVector y = x;
    for (int step = 0; step < horizon; ++step) y = T.entries() * y;
    if (y.norm() <= 1e-8) {
      ++decayed;
      worst_p_residual =
          std::max(worst_p_residual, (d.projection.matrix * x).norm());
    }
  }
  block.record("max_p_norm_on_decayed_samples", worst_p_residual, 1e-6);
  block.certificates["decayed_samples"] = decayed;
  block.certificates["sample_count"] = sample_count;
  return block;
}

CheckBlock verify_rev_recurrence(const Decomposition& d,
                                 const OperatorMatrix& T, double epsilon,
                                 int horizon) {
  if (horizon < 1) throw InvalidInput("recurrence horizon must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidInput("recurrence epsilon must be > 0");
  CheckBlock block;
  block.name = "decomposition.recurrence";
  const Eigen::Index k = d.rev_basis.dim();

  int max_gap = 0;
  int min_returns = horizon + 1;
  for (Eigen::Index c = 0; c < k; ++c) {
    const CVector x = d.rev_basis.vectors().col(c);
    CVector y = x;
    std::vector<int> returns;
    for (int step = 1; step <= horizon; ++step) {
      y = T.entries() * y;
      if ((y - x).norm() < epsilon) returns.push_back(step);
    }
    if (returns.empty()) {
      std::ostringstream msg;
      msg << "rev basis vector " << c << " has empty return set for eps = "
          << epsilon << ", horizon = " << horizon
          << "; restriction eigenvalue angles:";
      const auto rev_ed = eigen_decompose(OperatorMatrix(d.t_rev, T.tol()));
      for (const auto& e : rev_ed.spectrum.eigenvalues) {
        msg << " " << std::arg(e.value);
      }
      throw HorizonError(msg.str());
    }
    int prev = 0;
    for (int r : returns) {
      max_gap = std::max(max_gap, r - prev);
      prev = r;
    }
    min_returns = std::min(min_returns, static_cast<int>(returns.size()));
  }
  if (k == 0) min_returns = 0;
  block.record("empty_return_sets", 0.0, 0.5);
  block.certificates["rev_dim"] = k;
  block.certificates["min_return_count"] = min_returns;
  block.certificates["max_return_gap"] = max_gap;
  return block;
}

}  // namespace koehler
