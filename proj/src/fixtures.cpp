#include "koehler/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "koehler/lattice.hpp"
#include "koehler/rng.hpp"

namespace koehler {

namespace {

const double kTwoPi = 2.0 * std::acos(-1.0);

double rational_angle(int p, int q) {
  return kTwoPi * static_cast<double>(p) / static_cast<double>(q);
}

std::vector<double> sorted_angles(std::vector<double> angles) {
  for (double& a : angles) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) {
                             return std::abs(a - b) < 1e-12;
                           }),
               angles.end());
  return angles;
}

CMatrix real_rotation(double theta) {
  CMatrix m(2, 2);
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return m;
}

// S = Q1 diag(sigma) Q2^* with singular values geometric in [1, cond].
CMatrix conditioned_similarity(int n, double cond, Rng& rng) {
  CMatrix g1(n, n), g2(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g1(i, j) = rng.gaussian_complex();
      g2(i, j) = rng.gaussian_complex();
    }
  }
  Eigen::HouseholderQR<CMatrix> qr1(g1), qr2(g2);
  const CMatrix q1 = qr1.householderQ() * CMatrix::Identity(n, n);
  const CMatrix q2 = qr2.householderQ() * CMatrix::Identity(n, n);
  RVector sigma(n);
  for (int i = 0; i < n; ++i) {
    sigma[i] = n == 1 ? 1.0
                      : std::pow(cond, static_cast<double>(i) /
                                           static_cast<double>(n - 1));
  }
  return q1 * sigma.cast<Complex>().asDiagonal() * q2.adjoint();
}

Fixture finalize(FixtureSpec spec, CMatrix matrix,
                 FixtureExpectation expected) {
  if (expected.positive) {
    if (matrix.imag().cwiseAbs().maxCoeff() != 0.0 ||
        matrix.real().minCoeff() < 0.0) {
      throw InternalError("positive-flagged fixture has negative entries");
    }
  }
  return Fixture{OperatorMatrix(matrix), std::move(expected),
                 std::move(spec)};
}

Fixture build_cyclic_shift(FixtureSpec spec) {
  const int k = spec.dim;
  if (k < 1) throw InvalidInput("cyclic shift needs dim >= 1");
  CMatrix m = CMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) m((i + 1) % k, i) = 1.0;
  FixtureExpectation expected;
  expected.positive = true;
  expected.rev_dim = k;
  expected.angle_lcm = k;
  std::vector<double> angles;
  for (int j = 0; j < k; ++j) angles.push_back(rational_angle(j, k));
  expected.peripheral_angles = sorted_angles(std::move(angles));
  return finalize(std::move(spec), std::move(m), std::move(expected));
}

Fixture build_nilpotent_shift(FixtureSpec spec) {
  const int k = spec.dim;
  if (k < 1) throw InvalidInput("nilpotent shift needs dim >= 1");
  CMatrix m = CMatrix::Zero(k, k);
  for (int i = 0; i + 1 < k; ++i) m(i, i + 1) = 1.0;
  FixtureExpectation expected;
  expected.positive = true;
  expected.rev_dim = 0;
  return finalize(std::move(spec), std::move(m), std::move(expected));
}

Fixture build_rotation_contraction(FixtureSpec spec) {
  const int dim = 2 * static_cast<int>(spec.angles.size()) +
                  static_cast<int>(spec.decay_rates.size());
  if (dim < 1) throw InvalidInput("rotation/contraction fixture is empty");
  spec.dim = dim;
  CMatrix m = CMatrix::Zero(dim, dim);
  std::vector<double> angles;
  int lcm = 1;
  int offset = 0;
  for (const auto& [p, q] : spec.angles) {
    if (q < 1) throw InvalidInput("angle denominator must be >= 1");
    const double theta = rational_angle(p, q);
    m.block(offset, offset, 2, 2) = real_rotation(theta);
    angles.push_back(theta);
    angles.push_back(-theta);
    lcm = std::lcm(lcm, q);
    offset += 2;
  }
  for (double rate : spec.decay_rates) {
    if (!(std::abs(rate) < 1.0)) {
      throw InvalidInput("decay rates must have modulus < 1");
    }
    m(offset, offset) = rate;
    ++offset;
  }
  FixtureExpectation expected;
  expected.rev_dim = 2 * static_cast<int>(spec.angles.size());
  expected.angle_lcm = lcm;
  expected.peripheral_angles =
      expected.rev_dim > 0 ? sorted_angles(std::move(angles))
                           : std::vector<double>{};
  return finalize(std::move(spec), std::move(m), std::move(expected));
}

Fixture build_random_power_bounded(FixtureSpec spec) {
  Rng rng(spec.seed);
  const int n = spec.dim;
  if (n < 2) throw InvalidInput("random power-bounded fixture needs dim >= 2");

  // unimodular part: distinct rational angles with denominators <= 6 so
  // the lcm of the periods stays small
  const int n_uni = std::min(n - 1, rng.uniform_int(1, 3));
  std::set<std::pair<int, int>> chosen;
  int attempts = 0;
  while (static_cast<int>(chosen.size()) < n_uni) {
    if (++attempts > 100) {
      throw InvalidInput("could not sample distinct rational angles");
    }
    const int q = rng.uniform_int(1, 6);
    const int p = rng.uniform_int(0, q - 1);
    const int g = std::gcd(p == 0 ? q : p, q);
    chosen.insert({p / g, q / g});
  }

  CMatrix d = CMatrix::Zero(n, n);
  std::vector<double> angles;
  int lcm = 1;
  int idx = 0;
  std::vector<std::pair<int, int>> angle_list(chosen.begin(), chosen.end());
  for (const auto& [p, q] : angle_list) {
    d(idx, idx) = std::polar(1.0, rational_angle(p, q));
    angles.push_back(rational_angle(p, q));
    lcm = std::lcm(lcm, q);
    ++idx;
  }

  // contractive part, pairwise separated eigenvalues; occasionally a
  // 2x2 Jordan block to exercise non-semisimple interior spectrum
  std::vector<Complex> used;
  for (const auto& [p, q] : angle_list) {
    used.push_back(std::polar(1.0, rational_angle(p, q)));
  }
  auto sample_contractive = [&]() {
    for (int attempt = 0; attempt < 100; ++attempt) {
      const Complex z = rng.uniform(0.2, 0.75) * rng.unit_complex();
      bool separated = true;
      for (const Complex& u : used) {
        if (std::abs(z - u) < 1e-3) separated = false;
      }
      if (separated) {
        used.push_back(z);
        return z;
      }
    }
    throw InvalidInput("could not sample separated contractive eigenvalues");
  };
  const bool with_jordan = n - idx >= 2 && rng.uniform() < 0.25;
  if (with_jordan) {
    const Complex z = sample_contractive();
    d(idx, idx) = z;
    d(idx, idx + 1) = 1.0;
    d(idx + 1, idx + 1) = z;
    idx += 2;
  }
  while (idx < n) {
    d(idx, idx) = sample_contractive();
    ++idx;
  }

  const double cond = rng.uniform(2.0, 50.0);
  const CMatrix s = conditioned_similarity(n, cond, rng);
  CMatrix t = s * d * s.inverse();

  FixtureExpectation expected;
  expected.rev_dim = n_uni;
  expected.angle_lcm = lcm;
  expected.peripheral_angles = sorted_angles(std::move(angles));
  return finalize(std::move(spec), std::move(t), std::move(expected));
}

// One irreducible nonnegative block with prescribed imprimitivity index.
RMatrix cyclic_block(int size, int h, Rng& rng) {
  RMatrix block = RMatrix::Zero(size, size);
  if (h <= 1) {
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) block(i, j) = rng.uniform(0.1, 1.0);
    }
    return block;
  }
  // partition into h cyclically connected groups
  std::vector<int> group_of(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) group_of[static_cast<std::size_t>(i)] = i % h;
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (group_of[static_cast<std::size_t>(j)] ==
          (group_of[static_cast<std::size_t>(i)] + 1) % h) {
        block(i, j) = rng.uniform(0.1, 1.0);
      }
    }
  }
  return block;
}

Fixture build_random_nonnegative(FixtureSpec spec) {
  Rng rng(spec.seed);
  const int n = spec.dim;
  if (n < 2) throw InvalidInput("random nonnegative fixture needs dim >= 2");

  const double variant = rng.uniform();
  RMatrix a = RMatrix::Zero(n, n);
  std::vector<double> angles;
  int rev_dim = 0;
  int lcm = 1;

  if (variant < 0.5 || n < 4) {
    // single irreducible block with imprimitivity h
    const int h = rng.uniform_int(1, std::min(4, n));
    a = cyclic_block(n, h, rng);
    for (int j = 0; j < h; ++j) angles.push_back(rational_angle(j, h));
    rev_dim = h;
    lcm = h;
  } else if (variant < 0.8) {
    // maximal block + strictly sub-radius block with one-way coupling
    const int size1 = rng.uniform_int(2, n - 2 < 2 ? 2 : n - 2);
    const int size2 = n - size1;
    const int h = rng.uniform_int(1, std::min(4, size1));
    RMatrix block1 = cyclic_block(size1, h, rng);
    RMatrix block2 = RMatrix::Zero(size2, size2);
    for (int i = 0; i < size2; ++i) {
      for (int j = 0; j < size2; ++j) block2(i, j) = rng.uniform(0.1, 1.0);
    }
    const double r1 = nonneg_spectral_radius(block1);
    const double r2 = nonneg_spectral_radius(block2);
    block2 *= 0.6 * r1 / r2;  // keep the second block strictly interior
    a.topLeftCorner(size1, size1) = block1;
    a.bottomRightCorner(size2, size2) = block2;
    for (int i = 0; i < size1; ++i) {
      for (int j = 0; j < size2; ++j) {
        if (rng.uniform() < 0.4) a(i, size1 + j) = rng.uniform(0.1, 1.0);
      }
    }
    for (int j = 0; j < h; ++j) angles.push_back(rational_angle(j, h));
    rev_dim = h;
    lcm = h;
  } else {
    // two decoupled maximal-radius blocks: peripheral angles are the union
    const int size1 = std::max(2, n / 2);
    const int size2 = n - size1;
    const int h1 = rng.uniform_int(1, std::min(4, size1));
    const int h2 = rng.uniform_int(1, std::min(4, std::max(1, size2)));
    RMatrix block1 = cyclic_block(size1, h1, rng);
    RMatrix block2 = cyclic_block(std::max(1, size2), h2, rng);
    if (size2 == 1) block2(0, 0) = 1.0;
    const double r1 = nonneg_spectral_radius(block1);
    const double r2 = nonneg_spectral_radius(block2);
    block2 *= r1 / r2;  // both blocks now share the maximal radius
    a.topLeftCorner(size1, size1) = block1;
    a.bottomRightCorner(size2, size2) = block2;
    for (int j = 0; j < h1; ++j) angles.push_back(rational_angle(j, h1));
    for (int j = 0; j < h2; ++j) angles.push_back(rational_angle(j, h2));
    rev_dim = h1 + h2;
    lcm = std::lcm(h1, h2);
  }

  a /= nonneg_spectral_radius(a);

  FixtureExpectation expected;
  expected.positive = true;
  expected.rev_dim = rev_dim;
  expected.angle_lcm = lcm;
  expected.peripheral_angles = sorted_angles(std::move(angles));
  return finalize(std::move(spec), a.cast<Complex>(), std::move(expected));
}

}  // namespace

Fixture build(const FixtureSpec& spec) {
  switch (spec.family) {
    case FixtureFamily::kCyclicShift:
      return build_cyclic_shift(spec);
    case FixtureFamily::kNilpotentShift:
      return build_nilpotent_shift(spec);
    case FixtureFamily::kRotationContraction:
      return build_rotation_contraction(spec);
    case FixtureFamily::kRandomNonnegative:
      return build_random_nonnegative(spec);
    case FixtureFamily::kRandomPowerBounded:
      return build_random_power_bounded(spec);
  }
  throw InvalidInput("unknown fixture family");
}

Fixture random_power_bounded_fixture(int max_dim, std::uint64_t seed) {
  Rng dims(seed ^ 0x9e3779b97f4a7c15ULL);
  FixtureSpec spec;
  spec.name = "random-power-bounded";
  spec.family = FixtureFamily::kRandomPowerBounded;
  spec.dim = dims.uniform_int(4, std::max(4, max_dim));
  spec.seed = seed;
  return build(spec);
}

Fixture random_nonnegative_fixture(int max_dim, std::uint64_t seed) {
  Rng dims(seed ^ 0xda942042e4dd58b5ULL);
  FixtureSpec spec;
  spec.name = "random-nonnegative";
  spec.family = FixtureFamily::kRandomNonnegative;
  spec.dim = dims.uniform_int(2, std::max(2, max_dim));
  spec.seed = seed;
  return build(spec);
}

std::vector<FixtureSpec> fixture_catalog() {
  std::vector<FixtureSpec> out;
  out.push_back({"cyclic-shift-5", FixtureFamily::kCyclicShift, 5, {}, {}, 0});
  out.push_back(
      {"nilpotent-shift-4", FixtureFamily::kNilpotentShift, 4, {}, {}, 0});
  out.push_back({"rotation-fifth-contraction",
                 FixtureFamily::kRotationContraction,
                 3,
                 {{1, 5}},
                 {0.3},
                 0});
  out.push_back({"random-nonnegative-8", FixtureFamily::kRandomNonnegative, 8,
                 {}, {}, 0});
  out.push_back({"random-power-bounded-8", FixtureFamily::kRandomPowerBounded,
                 8, {}, {}, 0});
  return out;
}

Fixture build_named(const std::string& name, std::uint64_t seed) {
  for (FixtureSpec spec : fixture_catalog()) {
    if (spec.name == name) {
      spec.seed = seed;
      return build(spec);
    }
  }
  std::ostringstream msg;
  msg << "unknown fixture name '" << name << "'";
  throw InvalidInput(msg.str());
}

}  // namespace koehler
