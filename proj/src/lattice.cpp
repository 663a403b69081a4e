#include "koehler/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "koehler/rng.hpp"

namespace koehler {

namespace {

const double kTwoPi = 2.0 * std::acos(-1.0);

double circular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

// Requires T to act as a real entrywise-nonnegative matrix up to tol_pos.
RMatrix require_nonneg_real(const OperatorMatrix& T, double tol_pos,
                            const char* who) {
  const CMatrix& m = T.entries();
  if (m.imag().cwiseAbs().maxCoeff() > tol_pos) {
    std::ostringstream msg;
    msg << who << ": operator has imaginary entries above tol_pos";
    throw InvalidInput(msg.str());
  }
  if (m.real().minCoeff() < -tol_pos) {
    std::ostringstream msg;
    msg << who << ": operator has negative entries below -tol_pos";
    throw InvalidInput(msg.str());
  }
  return m.real().cwiseMax(0.0);
}

// Sorts, merges within tol (including across the 0 / 2pi seam), returns
// cluster means normalized into [0, 2pi).
std::vector<double> cluster_angles(std::vector<double> angles, double tol) {
  if (angles.empty()) return angles;
  for (double& a : angles) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a > kTwoPi - tol) a -= kTwoPi;  // fold the seam onto ~0
  }
  std::sort(angles.begin(), angles.end());
  std::vector<double> out;
  std::size_t i = 0;
  while (i < angles.size()) {
    double sum = angles[i];
    std::size_t j = i + 1;
    while (j < angles.size() && angles[j] - angles[j - 1] <= tol) {
      sum += angles[j];
      ++j;
    }
    double mean = sum / static_cast<double>(j - i);
    if (std::abs(mean) <= tol) mean = 0.0;
    if (mean < 0.0) mean += kTwoPi;
    out.push_back(mean);
    i = j;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void CompositionOperator::validate() const {
  if (k_size < 1) throw InvalidInput("composition operator needs k >= 1");
  if (static_cast<int>(point_map.size()) != k_size) {
    throw InvalidInput("point map size must equal k_size");
  }
  for (int v : point_map) {
    if (v < 0 || v >= k_size) {
      throw InvalidInput("point map must be total on {0..k-1}");
    }
  }
}

RMatrix CompositionOperator::to_matrix() const {
  validate();
  RMatrix m = RMatrix::Zero(k_size, k_size);
  for (int i = 0; i < k_size; ++i) {
    m(i, point_map[static_cast<std::size_t>(i)]) = 1.0;
  }
  return m;
}

CheckBlock verify_positive_projection(const OperatorMatrix& T,
                                      const ProjectionMatrix& P,
                                      const ConeOrder& order) {
  order.validate();
  require_nonneg_real(T, order.tol_pos, "verify_positive_projection");

  CheckBlock block;
  block.name = "lattice.positive_projection";
  const double min_entry = P.matrix.real().minCoeff();
  const double max_imag = P.matrix.imag().cwiseAbs().maxCoeff();
  block.record("negative_part_of_P", std::max(0.0, -min_entry),
               order.tol_pos);
  block.record("imaginary_part_of_P", max_imag, order.tol_pos);
  block.certificates["min_entry"] = min_entry;
  return block;
}

LatticeOps induced_lattice_ops(const ProjectionMatrix& P,
                               const ConeOrder& order) {
  order.validate();
  const double min_entry = P.matrix.real().minCoeff();
  const double max_imag = P.matrix.imag().cwiseAbs().maxCoeff();
  if (min_entry < -order.tol_pos || max_imag > order.tol_pos) {
    throw InvalidInput("induced_lattice_ops requires a positive projection");
  }
  return LatticeOps{P.matrix.real().cwiseMax(0.0), order.tol_pos};
}

CheckBlock verify_lattice_laws(const ProjectionMatrix& P,
                               const ConeOrder& order, std::uint64_t seed,
                               int samples) {
  const LatticeOps ops = induced_lattice_ops(P, order);
  const Eigen::Index n = ops.p_real.rows();
  Rng rng(seed);

  double worst = 0.0;
  double worst_closure = 0.0;
  auto sample_im_p = [&]() {
    RVector u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = rng.gaussian();
    return RVector(ops.p_real * u);
  };
  for (int s = 0; s < samples; ++s) {
    const RVector x = sample_im_p();
    const RVector y = sample_im_p();
    const RVector z = sample_im_p();
    const auto update = [&](const RVector& lhs, const RVector& rhs) {
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    };
    update(ops.sup(x, y), ops.sup(y, x));
    update(ops.inf(x, y), ops.inf(y, x));
    update(ops.sup(ops.sup(x, y), z), ops.sup(x, ops.sup(y, z)));
    update(ops.inf(ops.inf(x, y), z), ops.inf(x, ops.inf(y, z)));
    update(ops.sup(x, x), x);
    update(ops.inf(x, x), x);
    update(ops.sup(x, ops.inf(x, y)), x);
    update(ops.inf(x, ops.sup(x, y)), x);
    worst_closure = std::max(worst_closure, ops.closure_defect(ops.sup(x, y)));
  }

  CheckBlock block;
  block.name = "lattice.laws";
  block.record("max_law_defect", worst, 1e-8);
  block.record("max_closure_defect", worst_closure, 1e-6);
  block.certificates["samples"] = samples;
  return block;
}

CheckBlock verify_lattice_isomorphism(const OperatorMatrix& T,
                                      const ProjectionMatrix& P,
                                      const ConeOrder& order,
                                      std::uint64_t seed, int samples,
                                      int inverse_horizon) {
  order.validate();
  const RMatrix t_real = require_nonneg_real(T, order.tol_pos,
                                             "verify_lattice_isomorphism");
  const LatticeOps ops = induced_lattice_ops(P, order);
  const Eigen::Index n = T.dim();
  Rng rng(seed);

  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    RVector u(n), v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u[i] = rng.gaussian();
      v[i] = rng.gaussian();
    }
    const RVector x = ops.p_real * u;
    const RVector y = ops.p_real * v;
    const RVector lhs_sup = t_real * ops.sup(x, y);
    const RVector rhs_sup = ops.sup(t_real * x, t_real * y);
    const RVector lhs_inf = t_real * ops.inf(x, y);
    const RVector rhs_inf = ops.inf(t_real * x, t_real * y);
    worst = std::max(worst, (lhs_sup - rhs_sup).norm());
    worst = std::max(worst, (lhs_inf - rhs_inf).norm());
  }

  const CMatrix j = inverse_on_rev(T, P, inverse_horizon);

  CheckBlock block;
  block.name = "lattice.isomorphism";
  block.record("max_homomorphism_defect", worst, 1e-6);
  block.record("negative_part_of_inverse",
               std::max(0.0, -j.real().minCoeff()), order.tol_pos);
  block.record("imaginary_part_of_inverse", j.imag().cwiseAbs().maxCoeff(),
               order.tol_pos);
  block.certificates["samples"] = samples;
  return block;
}

PeripheralSpectrum peripheral_spectrum(const OperatorMatrix& T, double tol_r,
                                       double tol_angle) {
  const auto ed = eigen_decompose(T);
  const double r = ed.spectrum.spectral_radius;
  PeripheralSpectrum ps;
  ps.radius = r;
  ps.tol_r = tol_r < 0.0 ? 1e-8 * (1.0 + r) : tol_r;
  ps.tol_angle = tol_angle;
  if (r <= 1e-12 * std::max(1.0, T.norm())) {
    ps.radius = 0.0;  // nilpotent convention: empty peripheral spectrum
    return ps;
  }
  std::vector<double> angles;
  for (const auto& e : ed.spectrum.eigenvalues) {
    if (std::abs(e.value) >= r - ps.tol_r) {
      angles.push_back(std::arg(e.value));
    }
  }
  ps.angles = cluster_angles(std::move(angles), tol_angle);
  return ps;
}

CyclicityCertificate check_cyclicity(const PeripheralSpectrum& ps,
                                     int k_max) {
  if (k_max < 1) throw InvalidInput("cyclicity needs k_max >= 1");
  CyclicityCertificate cert;
  cert.k_max = k_max;
  for (double theta : ps.angles) {
    for (int k = 1; k <= k_max; ++k) {
      const double target = std::fmod(k * theta, kTwoPi);
      bool found = false;
      for (double candidate : ps.angles) {
        if (circular_distance(target, candidate) <= ps.tol_angle) {
          found = true;
          break;
        }
      }
      if (!found) {
        cert.cyclic = false;
        cert.violations.emplace_back(theta, k);
      }
    }
  }
  return cert;
}

std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int counter = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<std::pair<int, std::size_t>> dfs;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    dfs.emplace_back(root, 0);
    while (!dfs.empty()) {
      auto& [u, child] = dfs.back();
      if (child < adjacency[static_cast<std::size_t>(u)].size()) {
        const int v = adjacency[static_cast<std::size_t>(u)][child++];
        if (index[v] == -1) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = 1;
          dfs.emplace_back(v, 0);
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
      } else {
        const int u_done = u;
        dfs.pop_back();
        if (!dfs.empty()) {
          low[dfs.back().first] = std::min(low[dfs.back().first], low[u_done]);
        }
        if (low[u_done] == index[u_done]) {
          components.emplace_back();
          while (true) {
            const int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            components.back().push_back(w);
            if (w == u_done) break;
          }
        }
      }
    }
  }
  return components;
}

int component_cycle_gcd(const std::vector<std::vector<int>>& adjacency,
                        const std::vector<int>& component) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> level(n, -1), in_component(n, 0);
  for (int v : component) in_component[v] = 1;

  std::vector<int> queue;
  queue.push_back(component[0]);
  level[component[0]] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int v : adjacency[static_cast<std::size_t>(u)]) {
      if (!in_component[v] || level[v] != -1) continue;
      level[v] = level[u] + 1;
      queue.push_back(v);
    }
  }

  int g = 0;
  for (int u : component) {
    for (int v : adjacency[static_cast<std::size_t>(u)]) {
      if (!in_component[v]) continue;
      g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
    }
  }
  return g;
}

namespace {

// Collatz-Wielandt bounds under power iteration on A + I (primitive for an
// irreducible A, so the bounds close geometrically).
double irreducible_radius(const RMatrix& a, double rel_tol, int max_iter) {
  const Eigen::Index m = a.rows();
  if (m == 1) return a(0, 0);
  RVector x = RVector::Constant(m, 1.0 / static_cast<double>(m));
  for (int iter = 0; iter < max_iter; ++iter) {
    const RVector y = a * x + x;
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double ratio = y[i] / x[i];
      hi = std::max(hi, ratio);
      lo = std::min(lo, ratio);
    }
    if (hi - lo <= rel_tol * hi) return 0.5 * (hi + lo) - 1.0;
    x = y / y.lpNorm<1>();
  }
  throw ConvergenceError(
      "Collatz-Wielandt power iteration did not converge within the cap");
}

std::vector<std::vector<int>> positive_adjacency(const RMatrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (a(i, j) > 0.0) {
        adjacency[static_cast<std::size_t>(i)].push_back(static_cast<int>(j));
      }
    }
  }
  return adjacency;
}

RMatrix submatrix(const RMatrix& a, const std::vector<int>& rows) {
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  RMatrix out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out(i, j) = a(rows[static_cast<std::size_t>(i)],
                    rows[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

bool has_self_loop(const RMatrix& a, int v) { return a(v, v) > 0.0; }

}  // namespace

double nonneg_spectral_radius(const RMatrix& a, double rel_tol,
                              int max_iter) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw InvalidInput("nonneg_spectral_radius needs a square matrix");
  }
  if (a.minCoeff() < 0.0) {
    throw InvalidInput("nonneg_spectral_radius needs a nonnegative matrix");
  }
  const auto components = strongly_connected_components(positive_adjacency(a));
  double radius = 0.0;
  for (const auto& comp : components) {
    if (comp.size() == 1 && !has_self_loop(a, comp[0])) continue;
    radius = std::max(
        radius, irreducible_radius(submatrix(a, comp), rel_tol, max_iter));
  }
  return radius;
}

PeripheralSpectrum frobenius_oracle(const OperatorMatrix& T, double tol_pos,
                                    double tol_angle) {
  const RMatrix a = require_nonneg_real(T, tol_pos, "frobenius_oracle");
  const auto adjacency = positive_adjacency(a);
  const auto components = strongly_connected_components(adjacency);

  std::vector<double> radii(components.size(), 0.0);
  double r = 0.0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& comp = components[c];
    if (comp.size() == 1 && !has_self_loop(a, comp[0])) continue;
    radii[c] = irreducible_radius(submatrix(a, comp), 1e-12, 10000);
    r = std::max(r, radii[c]);
  }

  PeripheralSpectrum ps;
  ps.radius = r;
  ps.tol_r = 1e-8 * (1.0 + r);
  ps.tol_angle = tol_angle;
  if (r <= 1e-12 * std::max(1.0, a.norm())) {
    ps.radius = 0.0;
    return ps;
  }
  std::vector<double> angles;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (radii[c] < r - ps.tol_r) continue;
    const int h = component_cycle_gcd(adjacency, components[c]);
    for (int j = 0; j < h; ++j) {
      angles.push_back(kTwoPi * j / h);
    }
  }
  ps.angles = cluster_angles(std::move(angles), tol_angle);
  return ps;
}

CheckBlock markov_power_mechanism(const CompositionOperator& c, int k_max,
                                  std::uint64_t sample_seed) {
  c.validate();
  const int m = c.k_size;
  if (k_max <= 0) k_max = m;
  const RMatrix t = c.to_matrix();
  const CMatrix tc = t.cast<Complex>();

  CheckBlock block;
  block.name = "markov.power_mechanism";

  // (i) multiplicativity T(f g) = (T f)(T g), exact for coordinate selection
  Rng rng(sample_seed);
  double mult_defect = 0.0;
  for (int s = 0; s < 16; ++s) {
    CVector f(m), g(m);
    for (int i = 0; i < m; ++i) {
      f[i] = rng.gaussian_complex();
      g[i] = rng.gaussian_complex();
    }
    const CVector lhs = tc * CVector(f.cwiseProduct(g));
    const CVector rhs = CVector(tc * f).cwiseProduct(CVector(tc * g));
    mult_defect = std::max(mult_defect, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  block.record("multiplicativity_defect", mult_defect, 0.0);

  // (ii) Markov: T 1 = 1, exact
  const RVector ones = RVector::Ones(m);
  block.record("markov_defect", (t * ones - ones).cwiseAbs().maxCoeff(), 0.0);

  // (iii) power mechanism on unimodular eigenpairs
  const OperatorMatrix op(t);
  const auto ed = eigen_decompose(op);
  int checked = 0, skipped = 0;
  double power_defect = 0.0, spectrum_defect = 0.0;
  for (Eigen::Index i = 0; i < ed.values.size(); ++i) {
    const Complex lambda = ed.values[i];
    if (std::abs(lambda) < 1.0 - 1e-9) continue;

    // lambda^k stays in the spectrum, eigenvector or not.
    for (int k = 1; k <= k_max; ++k) {
      const Complex lk = std::pow(lambda, k);
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < ed.values.size(); ++j) {
        best = std::min(best, std::abs(lk - ed.values[j]));
      }
      spectrum_defect = std::max(spectrum_defect, best);
    }

    // |x| must be constant on the support to realize x -> x^k in C(K).
    const CVector v = ed.vectors.col(i);
    const double vmax = v.cwiseAbs().maxCoeff();
    double support_min = vmax;
    for (int j = 0; j < m; ++j) {
      const double mod = std::abs(v[j]);
      if (mod > 1e-8 * vmax) support_min = std::min(support_min, mod);
    }
    if (vmax - support_min > 1e-6 * vmax) {
      ++skipped;  // eigenvector mixes bands of different modulus
      continue;
    }
    ++checked;
    CVector x = v / vmax;
    for (int j = 0; j < m; ++j) {
      if (std::abs(x[j]) <= 1e-8) x[j] = 0.0;  // off the support
    }
    CVector xk = CVector::Ones(m);
    for (int j = 0; j < m; ++j) {
      if (x[j] == Complex(0.0)) xk[j] = 0.0;
    }
    Complex lk = 1.0;
    for (int k = 1; k <= k_max; ++k) {
      xk = xk.cwiseProduct(x);
      lk *= lambda;
      const double defect = (tc * xk - lk * xk).cwiseAbs().maxCoeff();
      power_defect = std::max(power_defect, defect);
    }
  }
  block.record("power_eigenvector_defect", power_defect, 1e-10);
  block.record("power_spectrum_defect", spectrum_defect, 1e-10);
  block.certificates["unimodular_checked"] = checked;
  block.certificates["unimodular_skipped"] = skipped;
  if (skipped > 0) {
    block.certificates["note"] =
        "skipped eigenvectors without constant modulus on their support";
  }
  return block;
}

bool angle_sets_match(const std::vector<double>& a,
                      const std::vector<double>& b, double tol) {
  const auto covered = [tol](const std::vector<double>& xs,
                             const std::vector<double>& ys) {
    for (double x : xs) {
      bool found = false;
      for (double y : ys) {
        if (circular_distance(x, y) <= tol) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

}  // namespace koehler
