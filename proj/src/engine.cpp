#include "koehler/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace koehler {

namespace {

void require_power_bounded(const OperatorMatrix& T) {
  const auto pb = is_power_bounded(T, 64);
  if (!pb.power_bounded) {
    std::ostringstream msg;
    msg << "operator is not power-bounded (spectral radius "
        << pb.spectral_radius << ", " << pb.defective_unimodular.size()
        << " defective unimodular eigenvalue(s))";
    throw InvalidInput(msg.str());
  }
}

}  // namespace

OrbitClosure orbit_closure(const OperatorMatrix& T, int horizon,
                           double epsilon, const OrbitClosureOptions& options) {
  if (horizon < 1) throw InvalidInput("orbit horizon must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidInput("orbit epsilon must be positive");
  require_power_bounded(T);

  OrbitClosure out{SemigroupApprox{T, horizon, epsilon, {}, {}, {}}, {}};
  SemigroupApprox& net = out.net;

  CMatrix power = T.entries();
  for (int n = 1; n <= horizon; ++n) {
    if (n > 1) power = power * T.entries();
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.representatives.size(); ++i) {
      const double d = (net.representatives[i] - power).norm();
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0 && best_dist <= epsilon / 2.0) {
      net.index_of.push_back(best);
    } else {
      if (static_cast<int>(net.representatives.size()) >= options.net_cap) {
        std::ostringstream msg;
        msg << "orbit net exceeded cap " << options.net_cap
            << "; increase epsilon";
        throw CapExceeded(msg.str());
      }
      net.representatives.push_back(power);
      net.first_power.push_back(n);
      net.index_of.push_back(static_cast<int>(net.representatives.size()) - 1);
    }
  }

  if (options.with_product_report) {
    ProductClosureReport& report = out.product_report;
    report.threshold = 3.0 * epsilon;
    const int reps = static_cast<int>(net.representatives.size());
    for (int a = 0; a < reps; ++a) {
      for (int b = 0; b < reps; ++b) {
        const int idx = net.first_power[a] + net.first_power[b];
        if (idx > horizon) continue;
        const CMatrix product =
            net.representatives[a] * net.representatives[b];
        const CMatrix& target = net.representatives[net.index_of[idx - 1]];
        const double d = (product - target).norm();
        report.max_distance = std::max(report.max_distance, d);
        if (d > report.threshold) {
          report.violations.push_back({a, b, idx, d});
        }
      }
    }
  }
  return out;
}

ProjectionMatrix certify_projection(CMatrix p, const OperatorMatrix& T,
                                    bool spectral_witness,
                                    std::vector<long long> witness_indices) {
  ProjectionMatrix out;
  out.matrix = std::move(p);
  out.spectral_witness = spectral_witness;
  out.witness_indices = std::move(witness_indices);
  out.idempotency_residual = (out.matrix * out.matrix - out.matrix).norm();
  out.commutation_residual =
      (out.matrix * T.entries() - T.entries() * out.matrix).norm();

  const double p_norm = out.matrix.norm();
  const double idem_bound = 1e-8 * (1.0 + p_norm);
  const double comm_bound = 1e-8 * (1.0 + p_norm * T.norm());
  if (out.idempotency_residual > idem_bound) {
    std::ostringstream msg;
    msg << "idempotency residual " << out.idempotency_residual
        << " exceeds certificate bound " << idem_bound;
    throw InternalError(msg.str());
  }
  if (out.commutation_residual > comm_bound) {
    std::ostringstream msg;
    msg << "commutation residual " << out.commutation_residual
        << " exceeds certificate bound " << comm_bound;
    throw InternalError(msg.str());
  }
  return out;
}

ProjectionMatrix minimal_idempotent_spectral(const OperatorMatrix& T) {
  require_power_bounded(T);
  const double tol = T.tol();
  const auto split = invariant_split(
      T, [tol](const Complex& z) { return std::abs(z) >= 1.0 - tol; });
  return certify_projection(split.projector, T, true, {});
}

namespace {

// Q <- 3Q^2 - 2Q^3 until the residual meets `target` or stalls at the
// numerical floor; the residual decreases strictly inside the basin.
CMatrix purify(CMatrix q, double target, int max_iter = 100) {
  double residual = (q * q - q).norm();
  for (int iter = 0; iter < max_iter && residual > target; ++iter) {
    const CMatrix q2 = q * q;
    const CMatrix next = 3.0 * q2 - 2.0 * (q2 * q);
    const double next_residual = (next * next - next).norm();
    if (next_residual >= residual) break;
    q = next;
    residual = next_residual;
  }
  return q;
}

}  // namespace

ProjectionMatrix minimal_idempotent_dynamical(const OperatorMatrix& T,
                                              int horizon) {
  if (horizon < 1) throw InvalidInput("dynamical horizon must be >= 1");
  require_power_bounded(T);

  CMatrix power = T.entries();
  CMatrix best_power = power;
  int best_n = -1;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= horizon; ++n) {
    if (n > 1) power = power * T.entries();
    const double d = (power * power - power).norm();
    if (d < best_residual) {
      best_residual = d;
      best_n = n;
      best_power = power;
    }
  }
  if (best_residual >= kPurificationBasin) {
    std::ostringstream msg;
    msg << "no power T^n with n <= " << horizon
        << " reaches the purification basin ||T^{2n} - T^n|| < "
        << kPurificationBasin << " (best " << best_residual << " at n = "
        << best_n << "); increase the horizon";
    throw HorizonError(msg.str());
  }

  const double target = 5e-13 * (1.0 + best_power.norm());
  CMatrix p = purify(best_power, target);

  std::vector<long long> witness;
  long long idx = best_n;
  for (int k = 0; k < 8; ++k) {
    witness.push_back(idx);
    idx *= 2;
  }
  return certify_projection(std::move(p), T, false, std::move(witness));
}

namespace {
// Margin of 10x under the 1e-6 post-condition on ||TJ - P||.
constexpr double kReturnThreshold = 1e-7;
}

CMatrix inverse_on_rev(const OperatorMatrix& T, const ProjectionMatrix& P,
                       int horizon) {
  if (horizon < 1) throw InvalidInput("inverse horizon must be >= 1");
  const CMatrix& p = P.matrix;
  const Eigen::Index n = T.dim();

  CMatrix prev = CMatrix::Identity(n, n);  // T^{m-1}
  CMatrix power = T.entries();             // T^m
  int found = -1;
  for (int m = 1; m <= horizon; ++m) {
    if (m > 1) {
      prev = power;
      power = power * T.entries();
    }
    if ((power * p - p).norm() <= kReturnThreshold) {
      found = m;
      break;
    }
  }
  if (found < 0) {
    std::ostringstream msg;
    msg << "no near-return ||T^m P - P|| <= " << kReturnThreshold
        << " found for m <= " << horizon;
    throw HorizonError(msg.str());
  }

  const CMatrix j = prev * p;
  const double forward = (T.entries() * j - p).norm();
  const double backward = (j * T.entries() - p).norm();
  const double absorb_right = (j * p - j).norm();
  const double absorb_left = (p * j - j).norm();
  if (forward > 1e-6 || backward > 1e-6) {
    throw InternalError(
        "inverse_on_rev post-condition ||TJ-P||/||JT-P|| failed");
  }
  if (absorb_right > 1e-8 || absorb_left > 1e-8) {
    throw InternalError("inverse_on_rev post-condition JP = PJ = J failed");
  }
  return j;
}

CMatrix inverse_on_rev_direct(const OperatorMatrix& T,
                              const ProjectionMatrix& P) {
  const Eigen::Index n = T.dim();
  Eigen::JacobiSVD<CMatrix> svd(P.matrix,
                                Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 0.5) ++rank;
  }
  if (rank == 0) return CMatrix::Zero(n, n);

  const CMatrix v = svd.matrixU().leftCols(rank);  // orthonormal im P basis
  const CMatrix t_rev = v.adjoint() * T.entries() * v;
  Eigen::FullPivLU<CMatrix> lu(t_rev);
  if (!lu.isInvertible()) {
    throw InternalError("restriction of T to im P is singular");
  }
  // J = V T_rev^{-1} V^* P: project, invert in coordinates, map back.
  return v * lu.inverse() * v.adjoint() * P.matrix;
}

CommutationReport commutation_report(const SemigroupApprox& s) {
  CommutationReport report;
  report.threshold = 3.0 * s.epsilon * s.base.norm();
  const CMatrix& t = s.base.entries();
  for (const CMatrix& r : s.representatives) {
    const double d = (r * t - t * r).norm();
    report.residuals.push_back(d);
    report.max_residual = std::max(report.max_residual, d);
  }
  return report;
}

}  // namespace koehler
