#ifndef KOEHLER_IP_HPP_
#define KOEHLER_IP_HPP_

#include <optional>
#include <set>
#include <vector>

#include "koehler/jdlg.hpp"
#include "koehler/linalg.hpp"
#include "koehler/report.hpp"

namespace koehler {

/// Strictly increasing sequence together with all of its nonempty subset
/// sums.
struct IPWitness {
  std::vector<long long> sequence;
  std::set<long long> fs_set;
};

/// Exact set of nonempty subset sums. Requires a strictly increasing
/// positive sequence of length <= 20.
std::set<long long> finite_sums(const std::vector<long long>& xs);

/// Lexicographically first strictly increasing sequence of length m whose
/// finite sums all lie in `a` (elements of `a` must lie in [1, bound]);
/// absence after the exhaustive backtracking search is a valid result.
/// Requires m <= 8.
std::optional<IPWitness> find_fs_sequence(const std::set<long long>& a, int m,
                                          long long bound);

/// {n <= horizon : ||T^n x - x|| < epsilon}, exactly.
std::vector<int> return_time_set(const OperatorMatrix& T, const CVector& x,
                                 double epsilon, int horizon);

/// For each rev basis vector the return set carries a length-m finite-sums
/// witness; eigenvectors whose eigenvalue is a primitive k-th root of unity
/// must return exactly on k N intersected with [1, horizon] whenever epsilon
/// is below half the minimal orbit gap min_j |1 - e^{2 pi i j / k}| ||x||.
CheckBlock verify_ip_recurrence(const OperatorMatrix& T,
                                const Decomposition& d, double epsilon,
                                int horizon, int m = 4);

}  // namespace koehler

#endif  // KOEHLER_IP_HPP_
