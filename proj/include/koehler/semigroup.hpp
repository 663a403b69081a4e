#ifndef KOEHLER_SEMIGROUP_HPP_
#define KOEHLER_SEMIGROUP_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "koehler/linalg.hpp"
#include "koehler/report.hpp"

namespace koehler {

/// Total map on {0, ..., k-1}; products compose left, (f g)(x) = f(g(x)).
using Transformation = std::vector<int>;

/// Square boolean matrix with rows stored as bitmasks (k <= 32).
struct BoolMatrix {
  int k = 0;
  std::vector<std::uint32_t> rows;

  bool operator==(const BoolMatrix&) const = default;
  bool operator<(const BoolMatrix& other) const {
    return rows < other.rows;
  }
};

BoolMatrix bool_multiply(const BoolMatrix& a, const BoolMatrix& b);

/// Element list + Cayley table; elements are labeled by the breadth-first
/// (shortlex) order in which generator words first produce them.
struct FiniteSemigroup {
  int size = 0;
  std::vector<std::vector<int>> cayley;  // cayley[a][b] = index of a * b
  std::vector<int> generators;           // element indices of the generators
  double epsilon = 0.0;                   // collapse tolerance (matrix kind)
  std::variant<std::monostate, std::vector<Transformation>,
               std::vector<BoolMatrix>, std::vector<CMatrix>>
      meta;

  int product(int a, int b) const { return cayley[a][b]; }
  bool has_meta() const {
    return !std::holds_alternative<std::monostate>(meta);
  }
};

inline constexpr int kDefaultSemigroupCap = 4096;

// Closure of the generators under the product, breadth-first; the Cayley
// table is verified associative after construction (fully for size <= 512,
// sampled above).
FiniteSemigroup generate_transformation_semigroup(
    const std::vector<Transformation>& generators,
    int cap = kDefaultSemigroupCap);
FiniteSemigroup generate_boolean_matrix_semigroup(
    const std::vector<BoolMatrix>& generators, int cap = kDefaultSemigroupCap);
// Products are identified when their Frobenius distance is below epsilon;
// a product that lands outside the net or an associativity defect raises
// CollapseTooCoarse.
FiniteSemigroup generate_matrix_semigroup(
    const std::vector<CMatrix>& generators, double epsilon,
    int cap = kDefaultSemigroupCap);

FiniteSemigroup from_cayley_table(std::vector<std::vector<int>> table);

/// Exact set {a : a * a = a}; nonempty for every finite semigroup.
std::vector<int> idempotents(const FiniteSemigroup& s);

/// The unique idempotent in the cycle of the power sequence a, a^2, ...
int idempotent_power(const FiniteSemigroup& s, int a);

/// All pairs (p, q) of idempotents with p <= q, i.e. p = pq = qp.
std::vector<std::pair<int, int>> idempotent_order(const FiniteSemigroup& s);

struct IdealRecord {
  enum class Kind { kLeft, kRight };
  Kind kind = Kind::kLeft;
  std::vector<int> members;     // sorted element indices
  bool minimal = false;
  std::vector<int> generators;  // elements a with S*a (resp. a*S) = members
};

struct MinimalIdealsReport {
  std::vector<IdealRecord> left;
  std::vector<IdealRecord> right;
};

/// Every principal ideal S*a and a*S, deduplicated; minimal ones flagged
/// (minimality among principal ideals suffices in a finite semigroup).
MinimalIdealsReport minimal_ideals(const FiniteSemigroup& s);

/// Indices of order-minimal idempotents.
std::vector<int> minimal_idempotents(const FiniteSemigroup& s);

/// Rees structure checks: e S e is a group for each minimal idempotent e;
/// every intersection of a minimal left and right ideal is a group with
/// exactly one idempotent e, and e S / S e reproduce the ideals; order-
/// minimal idempotents coincide with the idempotents of the minimal ideals.
CheckBlock rees_checks(const FiniteSemigroup& s);

/// Kernel/image correspondence of the minimal idempotents (needs meta):
/// equal kernels <=> same minimal left ideal, equal images <=> same minimal
/// right ideal, and (kernel, image) -> idempotent is a bijection, so
/// #minimal idempotents = #minimal left ideals x #minimal right ideals.
CheckBlock minidem_correspondence(const FiniteSemigroup& s);

/// Elements commuting with all of S; verified to equal the centralizer of
/// the generating set.
std::vector<int> center(const FiniteSemigroup& s);

}  // namespace koehler

#endif  // KOEHLER_SEMIGROUP_HPP_
