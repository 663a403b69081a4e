#include "koehler/semigroup.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "koehler/rng.hpp"

namespace koehler {

BoolMatrix bool_multiply(const BoolMatrix& a, const BoolMatrix& b) {
  BoolMatrix out{a.k, std::vector<std::uint32_t>(a.rows.size(), 0)};
  for (int i = 0; i < a.k; ++i) {
    std::uint32_t row = 0;
    for (int j = 0; j < a.k; ++j) {
      if (a.rows[static_cast<std::size_t>(i)] & (1u << j)) {
        row |= b.rows[static_cast<std::size_t>(j)];
      }
    }
    out.rows[static_cast<std::size_t>(i)] = row;
  }
  return out;
}

namespace {

void verify_associativity(const std::vector<std::vector<int>>& cayley) {
  const int m = static_cast<int>(cayley.size());
  auto check = [&](int a, int b, int c) {
    if (cayley[static_cast<std::size_t>(cayley[static_cast<std::size_t>(a)]
                                              [static_cast<std::size_t>(b)])]
              [static_cast<std::size_t>(c)] !=
        cayley[static_cast<std::size_t>(a)][static_cast<std::size_t>(
            cayley[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)])]) {
      std::ostringstream msg;
      msg << "Cayley table is not associative at (" << a << ", " << b << ", "
          << c << ")";
      throw CollapseTooCoarse(msg.str());
    }
  };
  if (m <= 512) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int c = 0; c < m; ++c) check(a, b, c);
      }
    }
  } else {
    Rng rng(0x5eedu);
    for (int trial = 0; trial < 200000; ++trial) {
      check(rng.uniform_int(0, m - 1), rng.uniform_int(0, m - 1),
            rng.uniform_int(0, m - 1));
    }
  }
}

// Generic breadth-first closure. Lookup must return the index of an element
// equal (or epsilon-equal) to the probe, or -1.
template <typename Element, typename Product, typename Lookup>
FiniteSemigroup close_under_products(std::vector<Element> generators,
                                     Product product, Lookup lookup, int cap,
                                     std::vector<Element>& elements) {
  if (generators.empty()) throw InvalidInput("need at least one generator");
  FiniteSemigroup s;

  std::vector<Element> gen_objects;
  for (const Element& g : generators) {
    if (lookup(elements, g) < 0) {
      elements.push_back(g);
      s.generators.push_back(static_cast<int>(elements.size()) - 1);
    } else {
      s.generators.push_back(lookup(elements, g));
    }
    gen_objects.push_back(g);
  }

  // Shortlex discovery: extend each known element by each generator.
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const Element& g : gen_objects) {
      const Element p = product(elements[i], g);
      if (lookup(elements, p) < 0) {
        if (static_cast<int>(elements.size()) >= cap) {
          std::ostringstream msg;
          msg << "semigroup closure exceeded cap " << cap;
          throw CapExceeded(msg.str());
        }
        elements.push_back(p);
      }
    }
  }

  const int m = static_cast<int>(elements.size());
  s.size = m;
  s.cayley.assign(static_cast<std::size_t>(m),
                  std::vector<int>(static_cast<std::size_t>(m), -1));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const Element p = product(elements[static_cast<std::size_t>(a)],
                                elements[static_cast<std::size_t>(b)]);
      const int idx = lookup(elements, p);
      if (idx < 0) {
        throw CollapseTooCoarse(
            "product of two elements escaped the closure; epsilon too coarse "
            "or generators not closed");
      }
      s.cayley[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = idx;
    }
  }
  verify_associativity(s.cayley);
  return s;
}

}  // namespace

FiniteSemigroup generate_transformation_semigroup(
    const std::vector<Transformation>& generators, int cap) {
  for (const auto& g : generators) {
    if (g.empty()) throw InvalidInput("empty transformation");
    for (int v : g) {
      if (v < 0 || v >= static_cast<int>(g.size())) {
        throw InvalidInput("transformation image out of range");
      }
    }
  }
  std::vector<Transformation> elements;
  auto product = [](const Transformation& f, const Transformation& g) {
    Transformation out(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) {
      out[x] = f[static_cast<std::size_t>(g[x])];  // (f g)(x) = f(g(x))
    }
    return out;
  };
  auto lookup = [](const std::vector<Transformation>& xs,
                   const Transformation& p) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == p) return static_cast<int>(i);
    }
    return -1;
  };
  FiniteSemigroup s =
      close_under_products(generators, product, lookup, cap, elements);
  s.meta = std::move(elements);
  return s;
}

FiniteSemigroup generate_boolean_matrix_semigroup(
    const std::vector<BoolMatrix>& generators, int cap) {
  for (const auto& g : generators) {
    if (g.k < 1 || g.k > 32 ||
        static_cast<int>(g.rows.size()) != g.k) {
      throw InvalidInput("boolean matrix must be square with 1 <= k <= 32");
    }
  }
  std::vector<BoolMatrix> elements;
  auto lookup = [](const std::vector<BoolMatrix>& xs, const BoolMatrix& p) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == p) return static_cast<int>(i);
    }
    return -1;
  };
  FiniteSemigroup s = close_under_products(generators, bool_multiply, lookup,
                                           cap, elements);
  s.meta = std::move(elements);
  return s;
}

FiniteSemigroup generate_matrix_semigroup(const std::vector<CMatrix>& generators,
                                          double epsilon, int cap) {
  if (!(epsilon > 0.0)) throw InvalidInput("collapse epsilon must be > 0");
  for (const auto& g : generators) {
    if (g.rows() != g.cols() || g.rows() < 1) {
      throw InvalidInput("matrix generators must be square");
    }
  }
  std::vector<CMatrix> elements;
  auto product = [](const CMatrix& a, const CMatrix& b) {
    return CMatrix(a * b);
  };
  auto lookup = [epsilon](const std::vector<CMatrix>& xs, const CMatrix& p) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if ((xs[i] - p).norm() < epsilon) return static_cast<int>(i);
    }
    return -1;
  };
  FiniteSemigroup s =
      close_under_products(generators, product, lookup, cap, elements);
  s.epsilon = epsilon;
  s.meta = std::move(elements);
  return s;
}

FiniteSemigroup from_cayley_table(std::vector<std::vector<int>> table) {
  const int m = static_cast<int>(table.size());
  if (m < 1) throw InvalidInput("Cayley table must be nonempty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != m) {
      throw InvalidInput("Cayley table must be square");
    }
    for (int v : row) {
      if (v < 0 || v >= m) throw InvalidInput("Cayley table entry out of range");
    }
  }
  verify_associativity(table);
  FiniteSemigroup s;
  s.size = m;
  s.cayley = std::move(table);
  for (int i = 0; i < m; ++i) s.generators.push_back(i);
  return s;
}

std::vector<int> idempotents(const FiniteSemigroup& s) {
  std::vector<int> out;
  for (int a = 0; a < s.size; ++a) {
    if (s.product(a, a) == a) out.push_back(a);
  }
  return out;
}

int idempotent_power(const FiniteSemigroup& s, int a) {
  // Walk a, a^2, ... until the cycle closes, then find its idempotent.
  std::vector<int> seen_at(static_cast<std::size_t>(s.size), -1);
  std::vector<int> sequence;
  int x = a;
  while (seen_at[static_cast<std::size_t>(x)] < 0) {
    seen_at[static_cast<std::size_t>(x)] =
        static_cast<int>(sequence.size());
    sequence.push_back(x);
    x = s.product(x, a);
  }
  for (std::size_t i =
           static_cast<std::size_t>(seen_at[static_cast<std::size_t>(x)]);
       i < sequence.size(); ++i) {
    if (s.product(sequence[i], sequence[i]) == sequence[i]) {
      return sequence[i];
    }
  }
  throw InternalError("power cycle without idempotent; table corrupt");
}

std::vector<std::pair<int, int>> idempotent_order(const FiniteSemigroup& s) {
  const std::vector<int> es = idempotents(s);
  std::vector<std::pair<int, int>> order;
  for (int p : es) {
    for (int q : es) {
      if (s.product(p, q) == p && s.product(q, p) == p) {
        order.emplace_back(p, q);
      }
    }
  }
  return order;
}

namespace {

std::vector<int> principal_left(const FiniteSemigroup& s, int a) {
  std::set<int> members;
  for (int x = 0; x < s.size; ++x) members.insert(s.product(x, a));
  return {members.begin(), members.end()};
}

std::vector<int> principal_right(const FiniteSemigroup& s, int a) {
  std::set<int> members;
  for (int x = 0; x < s.size; ++x) members.insert(s.product(a, x));
  return {members.begin(), members.end()};
}

bool strict_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return a.size() < b.size() &&
         std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<IdealRecord> collect_ideals(
    const FiniteSemigroup& s, IdealRecord::Kind kind,
    const std::function<std::vector<int>(int)>& principal) {
  std::map<std::vector<int>, std::vector<int>> by_members;
  for (int a = 0; a < s.size; ++a) by_members[principal(a)].push_back(a);

  std::vector<IdealRecord> records;
  for (auto& [members, gens] : by_members) {
    records.push_back({kind, members, true, gens});
  }
  for (auto& r : records) {
    for (const auto& other : records) {
      if (&other != &r && strict_subset(other.members, r.members)) {
        r.minimal = false;
        break;
      }
    }
  }
  return records;
}

}  // namespace

MinimalIdealsReport minimal_ideals(const FiniteSemigroup& s) {
  MinimalIdealsReport report;
  report.left = collect_ideals(s, IdealRecord::Kind::kLeft,
                               [&](int a) { return principal_left(s, a); });
  report.right = collect_ideals(s, IdealRecord::Kind::kRight,
                                [&](int a) { return principal_right(s, a); });
  return report;
}

std::vector<int> minimal_idempotents(const FiniteSemigroup& s) {
  const std::vector<int> es = idempotents(s);
  const auto order = idempotent_order(s);
  std::vector<int> out;
  for (int e : es) {
    bool is_minimal = true;
    for (const auto& [p, q] : order) {
      if (q == e && p != e) {
        is_minimal = false;
        break;
      }
    }
    if (is_minimal) out.push_back(e);
  }
  return out;
}

namespace {

std::vector<int> sandwich(const FiniteSemigroup& s, int e) {
  std::set<int> members;
  for (int x = 0; x < s.size; ++x) {
    members.insert(s.product(e, s.product(x, e)));
  }
  return {members.begin(), members.end()};
}

bool is_group_with_identity(const FiniteSemigroup& s,
                            const std::vector<int>& members, int e) {
  // closed, e two-sided identity, unique idempotent, all invertible
  std::set<int> set(members.begin(), members.end());
  for (int g : members) {
    for (int h : members) {
      if (!set.count(s.product(g, h))) return false;
    }
  }
  for (int g : members) {
    if (s.product(e, g) != g || s.product(g, e) != g) return false;
  }
  int idem_count = 0;
  for (int g : members) {
    if (s.product(g, g) == g) ++idem_count;
  }
  if (idem_count != 1) return false;
  for (int g : members) {
    bool invertible = false;
    for (int h : members) {
      if (s.product(g, h) == e && s.product(h, g) == e) {
        invertible = true;
        break;
      }
    }
    if (!invertible) return false;
  }
  return true;
}

std::vector<int> intersect_sorted(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace

CheckBlock rees_checks(const FiniteSemigroup& s) {
  CheckBlock block;
  block.name = "semigroup.rees";

  const auto ideals = minimal_ideals(s);
  const auto min_idem = minimal_idempotents(s);

  // Order-minimal idempotents = idempotents living in the minimal ideals.
  std::set<int> in_minimal_left;
  for (const auto& record : ideals.left) {
    if (!record.minimal) continue;
    for (int a : record.members) {
      if (s.product(a, a) == a) in_minimal_left.insert(a);
    }
  }
  const bool coherent =
      in_minimal_left == std::set<int>(min_idem.begin(), min_idem.end());
  block.record("order_vs_ideal_minimality_mismatch", coherent ? 0.0 : 1.0,
               0.5);

  int group_failures = 0;
  for (int e : min_idem) {
    if (!is_group_with_identity(s, sandwich(s, e), e)) ++group_failures;
  }
  block.record("eSe_group_failures", group_failures, 0.5);

  int intersection_failures = 0;
  int pair_count = 0;
  for (const auto& left : ideals.left) {
    if (!left.minimal) continue;
    for (const auto& right : ideals.right) {
      if (!right.minimal) continue;
      ++pair_count;
      const std::vector<int> inter =
          intersect_sorted(left.members, right.members);
      std::vector<int> inter_idems;
      for (int g : inter) {
        if (s.product(g, g) == g) inter_idems.push_back(g);
      }
      if (inter_idems.size() != 1) {
        ++intersection_failures;
        continue;
      }
      const int e = inter_idems[0];
      if (!is_group_with_identity(s, inter, e)) {
        ++intersection_failures;
        continue;
      }
      if (principal_right(s, e) != right.members ||
          principal_left(s, e) != left.members) {
        ++intersection_failures;
      }
    }
  }
  block.record("minimal_LR_intersection_failures", intersection_failures, 0.5);
  block.certificates["minimal_idempotents"] = min_idem.size();
  block.certificates["minimal_LR_pairs"] = pair_count;
  return block;
}

namespace {

using ClassKey = std::vector<long long>;

ClassKey kernel_key(const Transformation& f) {
  // canonical partition: class ids in order of first occurrence
  std::map<int, long long> first;
  ClassKey key;
  for (int v : f) {
    auto [it, inserted] =
        first.emplace(v, static_cast<long long>(first.size()));
    key.push_back(it->second);
  }
  return key;
}

ClassKey image_key(const Transformation& f) {
  std::set<int> image(f.begin(), f.end());
  return {image.begin(), image.end()};
}

ClassKey row_space_key(const BoolMatrix& a) {
  // all boolean combinations of the rows, as a sorted set of bitmasks
  std::set<std::uint32_t> space;
  const int k = a.k;
  for (std::uint32_t pick = 0; pick < (1u << k); ++pick) {
    std::uint32_t combo = 0;
    for (int i = 0; i < k; ++i) {
      if (pick & (1u << i)) combo |= a.rows[static_cast<std::size_t>(i)];
    }
    space.insert(combo);
  }
  return {space.begin(), space.end()};
}

BoolMatrix bool_transpose(const BoolMatrix& a) {
  BoolMatrix out{a.k, std::vector<std::uint32_t>(a.rows.size(), 0)};
  for (int i = 0; i < a.k; ++i) {
    for (int j = 0; j < a.k; ++j) {
      if (a.rows[static_cast<std::size_t>(i)] & (1u << j)) {
        out.rows[static_cast<std::size_t>(j)] |= (1u << i);
      }
    }
  }
  return out;
}

// Orthogonal projectors onto the kernel and image of a float matrix; class
// keys are assigned by epsilon-linkage across the element list.
struct SubspaceClasses {
  std::vector<long long> kernel_class;
  std::vector<long long> image_class;
};

SubspaceClasses classify_matrix_subspaces(const std::vector<CMatrix>& mats,
                                          double epsilon) {
  const std::size_t m = mats.size();
  std::vector<CMatrix> kernel_proj(m), image_proj(m);
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::JacobiSVD<CMatrix> svd(mats[i],
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& sv = svd.singularValues();
    const double cut = std::max(1e-10, 1e-8 * (sv.size() ? sv[0] : 0.0));
    Eigen::Index rank = 0;
    for (Eigen::Index j = 0; j < sv.size(); ++j) {
      if (sv[j] > cut) ++rank;
    }
    const CMatrix u = svd.matrixU().leftCols(rank);
    const CMatrix v0 = svd.matrixV().rightCols(sv.size() - rank);
    image_proj[i] = u * u.adjoint();
    kernel_proj[i] = v0 * v0.adjoint();
  }
  const double threshold = std::max(epsilon, 1e-8);
  auto assign = [&](const std::vector<CMatrix>& projs) {
    std::vector<long long> cls(m, -1);
    long long next = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (cls[i] >= 0) continue;
      cls[i] = next;
      for (std::size_t j = i + 1; j < m; ++j) {
        if (cls[j] < 0 && (projs[i] - projs[j]).norm() < threshold) {
          cls[j] = next;
        }
      }
      ++next;
    }
    return cls;
  };
  return {assign(kernel_proj), assign(image_proj)};
}

}  // namespace

CheckBlock minidem_correspondence(const FiniteSemigroup& s) {
  if (!s.has_meta()) {
    throw UnsupportedInput(
        "minidem_correspondence needs element metadata (transformations, "
        "boolean matrices, or float matrices)");
  }

  std::vector<ClassKey> kernels(static_cast<std::size_t>(s.size));
  std::vector<ClassKey> images(static_cast<std::size_t>(s.size));
  if (const auto* tf = std::get_if<std::vector<Transformation>>(&s.meta)) {
    for (int i = 0; i < s.size; ++i) {
      kernels[static_cast<std::size_t>(i)] =
          kernel_key((*tf)[static_cast<std::size_t>(i)]);
      images[static_cast<std::size_t>(i)] =
          image_key((*tf)[static_cast<std::size_t>(i)]);
    }
  } else if (const auto* bm = std::get_if<std::vector<BoolMatrix>>(&s.meta)) {
    for (int i = 0; i < s.size; ++i) {
      // row space plays the kernel role, column space the image role
      kernels[static_cast<std::size_t>(i)] =
          row_space_key((*bm)[static_cast<std::size_t>(i)]);
      images[static_cast<std::size_t>(i)] =
          row_space_key(bool_transpose((*bm)[static_cast<std::size_t>(i)]));
    }
  } else if (const auto* fm = std::get_if<std::vector<CMatrix>>(&s.meta)) {
    const auto classes = classify_matrix_subspaces(*fm, s.epsilon);
    for (int i = 0; i < s.size; ++i) {
      kernels[static_cast<std::size_t>(i)] = {
          classes.kernel_class[static_cast<std::size_t>(i)]};
      images[static_cast<std::size_t>(i)] = {
          classes.image_class[static_cast<std::size_t>(i)]};
    }
  }

  const auto min_idem = minimal_idempotents(s);

  int left_mismatches = 0;
  int right_mismatches = 0;
  for (int e : min_idem) {
    for (int f : min_idem) {
      const bool same_left = principal_left(s, e) == principal_left(s, f);
      const bool same_kernel = kernels[static_cast<std::size_t>(e)] ==
                               kernels[static_cast<std::size_t>(f)];
      if (same_left != same_kernel) ++left_mismatches;
      const bool same_right = principal_right(s, e) == principal_right(s, f);
      const bool same_image = images[static_cast<std::size_t>(e)] ==
                              images[static_cast<std::size_t>(f)];
      if (same_right != same_image) ++right_mismatches;
    }
  }

  // (kernel, image) -> minimal idempotent must be a bijection onto the full
  // product of classes realized by minimal idempotents.
  std::set<ClassKey> kernel_classes, image_classes;
  std::map<std::pair<ClassKey, ClassKey>, int> pair_count;
  for (int e : min_idem) {
    kernel_classes.insert(kernels[static_cast<std::size_t>(e)]);
    image_classes.insert(images[static_cast<std::size_t>(e)]);
    ++pair_count[{kernels[static_cast<std::size_t>(e)],
                  images[static_cast<std::size_t>(e)]}];
  }
  bool bijective =
      min_idem.size() == kernel_classes.size() * image_classes.size() &&
      pair_count.size() == min_idem.size();
  for (const auto& [key, count] : pair_count) {
    if (count != 1) bijective = false;
  }

  const auto ideals = minimal_ideals(s);
  std::size_t min_left = 0, min_right = 0;
  for (const auto& r : ideals.left) min_left += r.minimal ? 1 : 0;
  for (const auto& r : ideals.right) min_right += r.minimal ? 1 : 0;
  const bool counts_match = kernel_classes.size() == min_left &&
                            image_classes.size() == min_right;

  CheckBlock block;
  block.name = "semigroup.minidem_correspondence";
  block.record("kernel_vs_left_ideal_mismatches", left_mismatches, 0.5);
  block.record("image_vs_right_ideal_mismatches", right_mismatches, 0.5);
  block.record("pair_map_not_bijective", bijective ? 0.0 : 1.0, 0.5);
  block.record("class_vs_ideal_count_mismatch", counts_match ? 0.0 : 1.0, 0.5);
  block.certificates["minimal_idempotents"] = min_idem.size();
  block.certificates["kernel_classes"] = kernel_classes.size();
  block.certificates["image_classes"] = image_classes.size();
  block.certificates["minimal_left_ideals"] = min_left;
  block.certificates["minimal_right_ideals"] = min_right;
  return block;
}

std::vector<int> center(const FiniteSemigroup& s) {
  std::vector<int> out;
  for (int x = 0; x < s.size; ++x) {
    bool central = true;
    for (int y = 0; y < s.size && central; ++y) {
      central = s.product(x, y) == s.product(y, x);
    }
    if (central) out.push_back(x);
  }
  // In the finite discrete case density = generation: the centralizer of
  // the generating set must coincide with the center.
  for (int x = 0; x < s.size; ++x) {
    bool commutes_with_gens = true;
    for (int g : s.generators) {
      if (s.product(x, g) != s.product(g, x)) {
        commutes_with_gens = false;
        break;
      }
    }
    const bool in_center =
        std::find(out.begin(), out.end(), x) != out.end();
    if (commutes_with_gens != in_center) {
      throw InternalError(
          "centralizer of the generators differs from the center");
    }
  }
  return out;
}

}  // namespace koehler
