#include "koehler/ip.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace koehler {

std::set<long long> finite_sums(const std::vector<long long>& xs) {
  if (xs.empty()) throw InvalidInput("finite_sums needs a nonempty sequence");
  if (xs.size() > 20) {
    throw InvalidInput("finite_sums limited to 20 elements (2^m blowup)");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0) throw InvalidInput("sequence elements must be positive");
    if (i > 0 && xs[i] <= xs[i - 1]) {
      throw InvalidInput("sequence must be strictly increasing");
    }
  }
  std::set<long long> out;
  const std::size_t m = xs.size();
  for (std::uint64_t mask = 1; mask < (1ull << m); ++mask) {
    long long sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1ull << i)) sum += xs[i];
    }
    out.insert(sum);
  }
  return out;
}

namespace {

bool extend_witness(const std::vector<long long>& candidates,
                    const std::set<long long>& a, int m,
                    std::vector<long long>& seq, std::set<long long>& sums,
                    std::size_t from) {
  if (static_cast<int>(seq.size()) == m) return true;
  for (std::size_t i = from; i < candidates.size(); ++i) {
    const long long x = candidates[i];
    // all new sums x and s + x must stay inside a
    if (!a.count(x)) continue;
    bool ok = true;
    std::vector<long long> added;
    added.push_back(x);
    for (long long s : sums) {
      if (!a.count(s + x)) {
        ok = false;
        break;
      }
      added.push_back(s + x);
    }
    if (!ok) continue;
    std::vector<long long> inserted;
    for (long long v : added) {
      if (sums.insert(v).second) inserted.push_back(v);
    }
    seq.push_back(x);
    if (extend_witness(candidates, a, m, seq, sums, i + 1)) return true;
    seq.pop_back();
    for (long long v : inserted) sums.erase(v);
  }
  return false;
}

}  // namespace

std::optional<IPWitness> find_fs_sequence(const std::set<long long>& a, int m,
                                          long long bound) {
  if (m < 1 || m > 8) throw InvalidInput("witness length must satisfy 1 <= m <= 8");
  for (long long v : a) {
    if (v < 1 || v > bound) {
      throw InvalidInput("set elements must lie in [1, bound]");
    }
  }
  const std::vector<long long> candidates(a.begin(), a.end());  // ascending
  std::vector<long long> seq;
  std::set<long long> sums;
  if (!extend_witness(candidates, a, m, seq, sums, 0)) return std::nullopt;
  return IPWitness{seq, finite_sums(seq)};
}

std::vector<int> return_time_set(const OperatorMatrix& T, const CVector& x,
                                 double epsilon, int horizon) {
  if (horizon < 1) throw InvalidInput("return horizon must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidInput("return epsilon must be > 0");
  if (x.size() != T.dim()) throw InvalidInput("vector dimension mismatch");
  std::vector<int> out;
  CVector y = x;
  for (int n = 1; n <= horizon; ++n) {
    y = T.entries() * y;
    if ((y - x).norm() < epsilon) out.push_back(n);
  }
  return out;
}

namespace {

// Smallest k <= cap with lambda^k = 1 (within tol), or 0 if none.
int root_of_unity_order(Complex lambda, int cap, double tol) {
  if (std::abs(std::abs(lambda) - 1.0) > tol) return 0;
  Complex power = 1.0;
  for (int k = 1; k <= cap; ++k) {
    power *= lambda;
    if (std::abs(power - 1.0) <= tol) return k;
  }
  return 0;
}

}  // namespace

CheckBlock verify_ip_recurrence(const OperatorMatrix& T,
                                const Decomposition& d, double epsilon,
                                int horizon, int m) {
  CheckBlock block;
  block.name = "ip.recurrence";

  int missing_witnesses = 0;
  const Eigen::Index k = d.rev_basis.dim();
  for (Eigen::Index c = 0; c < k; ++c) {
    const std::vector<int> returns =
        return_time_set(T, d.rev_basis.vectors().col(c), epsilon, horizon);
    if (returns.empty()) {
      std::ostringstream msg;
      msg << "rev basis vector " << c
          << " has empty return set; horizon too small for the angle "
             "structure";
      throw HorizonError(msg.str());
    }
    std::set<long long> r_set(returns.begin(), returns.end());
    const auto witness = find_fs_sequence(r_set, m, horizon);
    if (!witness.has_value()) {
      ++missing_witnesses;
      continue;
    }
    for (long long s : witness->fs_set) {
      if (!r_set.count(s)) ++missing_witnesses;  // cannot happen by search
    }
  }
  block.record("rev_vectors_without_fs_witness", missing_witnesses, 0.5);
  block.certificates["rev_dim"] = k;
  block.certificates["witness_length"] = m;

  // Eigenvectors at primitive roots of unity return exactly on multiples.
  const auto ed = eigen_decompose(T);
  int exact_checked = 0, exact_skipped = 0, exact_failures = 0;
  for (Eigen::Index i = 0; i < ed.values.size(); ++i) {
    const int order = root_of_unity_order(ed.values[i], 64, 1e-8);
    if (order == 0) continue;
    const CVector v = ed.vectors.col(i);
    double gap = 2.0;
    for (int j = 1; j < order; ++j) {
      gap = std::min(gap, std::abs(1.0 - std::pow(ed.values[i], j)));
    }
    gap *= v.norm();
    if (order > 1 && epsilon >= gap / 2.0) {
      ++exact_skipped;  // epsilon too coarse to separate the orbit points
      continue;
    }
    ++exact_checked;
    const std::vector<int> returns = return_time_set(T, v, epsilon, horizon);
    std::vector<int> expected;
    for (int n = order; n <= horizon; n += order) expected.push_back(n);
    if (returns != expected) ++exact_failures;
  }
  block.record("exact_return_set_failures", exact_failures, 0.5);
  block.certificates["exact_checked"] = exact_checked;
  block.certificates["exact_skipped"] = exact_skipped;
  return block;
}

}  // namespace koehler
