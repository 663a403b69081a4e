// Batch front door: load a matrix or semigroup, run a named analysis, emit
// a JSON report on stdout. Exit codes: 0 all checks pass, 1 a check failed,
// 2 malformed input, 3 internal error.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "koehler/battery.hpp"
#include "koehler/engine.hpp"
#include "koehler/errors.hpp"
#include "koehler/fixtures.hpp"
#include "koehler/io.hpp"
#include "koehler/ip.hpp"
#include "koehler/jdlg.hpp"
#include "koehler/lattice.hpp"
#include "koehler/report.hpp"
#include "koehler/semigroup.hpp"

namespace {

using namespace koehler;

using Clock = std::chrono::steady_clock;

struct Defaults {
  double tol = kDefaultTol;   // KOEHLER_TOL
  double epsilon = 1e-6;      // KOEHLER_EPSILON
  int horizon = 2048;         // KOEHLER_HORIZON
};

int finish(Report report, Clock::time_point start) {
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  std::cout << report.to_json().dump(2) << std::endl;
  if (!report.all_pass()) {
    std::cerr << "check failed: " << report.first_failure()->name << "\n";
    return 1;
  }
  return 0;
}

nlohmann::json projection_to_json(const ProjectionMatrix& p) {
  nlohmann::json j;
  j["idempotency_residual"] = p.idempotency_residual;
  j["commutation_residual"] = p.commutation_residual;
  j["witness"] = p.spectral_witness
                     ? nlohmann::json("spectral")
                     : nlohmann::json(p.witness_indices);
  return j;
}

CheckBlock projection_block(const ProjectionMatrix& p,
                            const OperatorMatrix& t, const char* name) {
  CheckBlock block;
  block.name = name;
  block.record("idempotency_residual", p.idempotency_residual,
               1e-8 * (1.0 + p.matrix.norm()));
  block.record("commutation_residual", p.commutation_residual,
               1e-8 * (1.0 + p.matrix.norm() * t.norm()));
  block.certificates = projection_to_json(p);
  return block;
}

int run_decompose(const std::string& input, const std::string& method,
                  const Defaults& defaults) {
  const auto start = Clock::now();
  Report report;
  report.analysis = "decompose";
  report.input_digest = fnv1a_hex(read_file(input));

  OperatorMatrix t(load_matrix_file(input), defaults.tol);

  ProjectionMatrix p;
  if (method == "dynamical") {
    p = minimal_idempotent_dynamical(t, defaults.horizon);
    report.blocks.push_back(projection_block(p, t, "idempotent.dynamical"));
  } else {
    p = minimal_idempotent_spectral(t);
    report.blocks.push_back(projection_block(p, t, "idempotent.spectral"));
  }
  if (method == "both") {
    const auto pd = minimal_idempotent_dynamical(t, defaults.horizon);
    report.blocks.push_back(projection_block(pd, t, "idempotent.dynamical"));
    CheckBlock agreement;
    agreement.name = "idempotent.agreement";
    agreement.record("construction_disagreement_per_dim",
                     (p.matrix - pd.matrix).norm() /
                         static_cast<double>(t.dim()),
                     1e-6);
    report.blocks.push_back(std::move(agreement));
  }

  const auto d = decompose(t, p);
  CheckBlock summary;
  summary.name = "decomposition.summary";
  summary.certificates["dim"] = t.dim();
  summary.certificates["rev_dim"] = d.rev_basis.dim();
  summary.certificates["aws_dim"] = d.aws_basis.dim();
  if (d.rev_basis.dim() > 0) {
    const Eigen::Index k = d.rev_basis.dim();
    summary.record("inverse_residual",
                   (d.t_rev * d.t_rev_inverse - CMatrix::Identity(k, k))
                       .norm(),
                   1e-8);
  }
  report.blocks.push_back(std::move(summary));

  // decomposition verification blocks; the invariance block also sweeps the
  // orbit-closure net when it fits under the cap.
  try {
    const auto oc = orbit_closure(t, std::min(defaults.horizon, 256),
                                  std::max(defaults.epsilon, 1e-6));
    report.blocks.push_back(verify_invariance(d, t, &oc.net));
  } catch (const CapExceeded&) {
    auto block = verify_invariance(d, t);
    block.certificates["note"] = "orbit net skipped: representative cap hit";
    report.blocks.push_back(std::move(block));
  }
  report.blocks.push_back(verify_unimodular_eigenvectors(d, t));
  report.blocks.push_back(verify_stability(d, t, defaults.horizon));
  report.blocks.push_back(
      verify_rev_recurrence(d, t, defaults.epsilon, defaults.horizon));
  report.blocks.push_back(
      verify_ip_recurrence(t, d, defaults.epsilon, defaults.horizon));
  return finish(std::move(report), start);
}

int run_cyclicity(const std::string& input, const Defaults& defaults) {
  const auto start = Clock::now();
  Report report;
  report.analysis = "cyclicity";
  report.input_digest = fnv1a_hex(read_file(input));

  OperatorMatrix t(load_matrix_file(input), defaults.tol);
  const auto ps = peripheral_spectrum(t);
  const auto oracle = frobenius_oracle(t);
  const auto cert = check_cyclicity(ps, static_cast<int>(t.dim()));

  CheckBlock spectrum_block;
  spectrum_block.name = "peripheral.spectrum";
  spectrum_block.certificates["radius"] = ps.radius;
  spectrum_block.certificates["angles"] = ps.angles;
  report.blocks.push_back(std::move(spectrum_block));

  CheckBlock oracle_block;
  oracle_block.name = "peripheral.oracle";
  oracle_block.certificates["radius"] = oracle.radius;
  oracle_block.certificates["angles"] = oracle.angles;
  oracle_block.record("radius_disagreement", std::abs(ps.radius - oracle.radius),
                      1e-8 * (1.0 + ps.radius));
  oracle_block.record(
      "angle_set_mismatch",
      angle_sets_match(ps.angles, oracle.angles, 1e-6) ? 0.0 : 1.0, 0.5);
  report.blocks.push_back(std::move(oracle_block));

  CheckBlock cyc_block;
  cyc_block.name = "peripheral.cyclicity";
  cyc_block.record("violations", static_cast<double>(cert.violations.size()),
                   0.5);
  cyc_block.certificates["k_max"] = cert.k_max;
  cyc_block.certificates["cyclic"] = cert.cyclic;
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& [theta, k] : cert.violations) {
    violations.push_back({{"theta", theta}, {"k", k}});
  }
  cyc_block.certificates["violation_list"] = std::move(violations);
  report.blocks.push_back(std::move(cyc_block));
  return finish(std::move(report), start);
}

int run_semigroup(const std::string& input, double epsilon) {
  const auto start = Clock::now();
  Report report;
  report.analysis = "semigroup";
  report.input_digest = fnv1a_hex(read_file(input));

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(input));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("invalid JSON: ") + e.what());
  }
  const auto s = semigroup_from_json(j, epsilon);

  CheckBlock summary;
  summary.name = "semigroup.summary";
  summary.certificates["size"] = s.size;
  summary.certificates["idempotents"] = idempotents(s);
  summary.certificates["minimal_idempotents"] = minimal_idempotents(s);
  summary.certificates["center"] = center(s);
  summary.certificates["cayley"] = cayley_to_json(s)["cayley"];
  report.blocks.push_back(std::move(summary));

  CheckBlock order_block;
  order_block.name = "semigroup.idempotent_order";
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [p, q] : idempotent_order(s)) {
    pairs.push_back({p, q});
  }
  order_block.certificates["pairs"] = std::move(pairs);
  report.blocks.push_back(std::move(order_block));

  CheckBlock ideal_block;
  ideal_block.name = "semigroup.minimal_ideals";
  const auto ideals = minimal_ideals(s);
  auto ideal_json = [](const std::vector<IdealRecord>& records) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : records) {
      out.push_back({{"members", r.members},
                     {"minimal", r.minimal},
                     {"generators", r.generators}});
    }
    return out;
  };
  ideal_block.certificates["left"] = ideal_json(ideals.left);
  ideal_block.certificates["right"] = ideal_json(ideals.right);
  report.blocks.push_back(std::move(ideal_block));

  report.blocks.push_back(rees_checks(s));
  if (s.has_meta()) {
    report.blocks.push_back(minidem_correspondence(s));
  } else {
    CheckBlock skip;
    skip.name = "semigroup.minidem_correspondence";
    skip.status = "skip";
    skip.certificates["note"] = "no element metadata on a raw Cayley table";
    report.blocks.push_back(std::move(skip));
  }
  return finish(std::move(report), start);
}

int run_ipsearch(const std::string& input, int length, long long bound) {
  const auto start = Clock::now();
  Report report;
  report.analysis = "ipsearch";
  report.input_digest = fnv1a_hex(read_file(input));

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(input));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("invalid JSON: ") + e.what());
  }
  const auto a = int_set_from_json(j);
  if (a.empty()) throw InvalidInput("the input set is empty");
  if (bound <= 0) bound = *a.rbegin();

  const auto witness = find_fs_sequence(a, length, bound);
  CheckBlock block;
  block.name = "ip.fs_search";
  block.certificates["length"] = length;
  block.certificates["bound"] = bound;
  block.certificates["found"] = witness.has_value();
  if (witness.has_value()) {
    block.certificates["witness"] = {{"sequence", witness->sequence},
                                     {"fs", witness->fs_set}};
  }
  report.blocks.push_back(std::move(block));
  return finish(std::move(report), start);
}

int run_fixtures(bool list, const std::string& name, std::uint64_t seed) {
  if (list) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& spec : fixture_catalog()) {
      out.push_back({{"name", spec.name}, {"dim", spec.dim}});
    }
    std::cout << out.dump(2) << std::endl;
    return 0;
  }
  const auto fixture = build_named(name, seed);
  // top-level dim/entries so the emitted file feeds straight back into
  // the other subcommands
  nlohmann::json out = matrix_to_json(fixture.matrix.entries());
  out["name"] = fixture.spec.name;
  out["seed"] = seed;
  out["expected"] = {
      {"power_bounded", fixture.expected.power_bounded},
      {"positive", fixture.expected.positive},
      {"peripheral_angles", fixture.expected.peripheral_angles},
      {"rev_dim", fixture.expected.rev_dim},
  };
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int run_battery_command(std::uint64_t seed, int count, const Defaults& defaults) {
  const auto start = Clock::now();
  BatteryOptions options;
  options.seed = seed;
  options.count = count;
  options.cyclicity_count = count * 10;
  options.tol = defaults.tol;
  options.epsilon = defaults.epsilon;
  options.horizon = defaults.horizon;
  Report report = run_battery(options);
  return finish(std::move(report), start);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Koehler-semigroup decompositions of power-bounded matrices"};
  app.require_subcommand(1);

  Defaults defaults;
  app.add_option("--tol", defaults.tol, "numerical tolerance")
      ->envname("KOEHLER_TOL");
  app.add_option("--epsilon", defaults.epsilon, "orbit/recurrence epsilon")
      ->envname("KOEHLER_EPSILON");
  app.add_option("--horizon", defaults.horizon, "power-orbit horizon")
      ->envname("KOEHLER_HORIZON");

  auto* decompose_cmd =
      app.add_subcommand("decompose", "JdLG-type decomposition + checks");
  std::string decompose_input;
  std::string method = "spectral";
  decompose_cmd->add_option("--input", decompose_input, "matrix file")
      ->required();
  decompose_cmd->add_option("--method", method, "spectral|dynamical|both")
      ->check(CLI::IsMember({"spectral", "dynamical", "both"}));

  auto* cyclicity_cmd = app.add_subcommand(
      "cyclicity", "peripheral spectrum, oracle, cyclicity verdict");
  std::string cyclicity_input;
  cyclicity_cmd->add_option("--input", cyclicity_input, "matrix file")
      ->required();

  auto* semigroup_cmd =
      app.add_subcommand("semigroup", "finite-semigroup structure report");
  std::string semigroup_input;
  semigroup_cmd->add_option("--generators", semigroup_input, "generators file")
      ->required();

  auto* ipsearch_cmd =
      app.add_subcommand("ipsearch", "finite-sums witness search");
  std::string ipsearch_input;
  int ipsearch_length = 4;
  long long ipsearch_bound = 0;
  ipsearch_cmd->add_option("--set", ipsearch_input, "integer set file")
      ->required();
  ipsearch_cmd->add_option("--length", ipsearch_length, "witness length");
  ipsearch_cmd->add_option("--bound", ipsearch_bound,
                           "candidate bound (default: max of the set)");

  auto* fixtures_cmd = app.add_subcommand("fixtures", "fixture registry");
  bool fixtures_list = false;
  std::string fixtures_name;
  std::uint64_t fixtures_seed = 0;
  fixtures_cmd->add_flag("--list", fixtures_list, "list fixture names");
  fixtures_cmd->add_option("--emit", fixtures_name, "emit a fixture by name");
  fixtures_cmd->add_option("--seed", fixtures_seed, "fixture seed");

  auto* battery_cmd =
      app.add_subcommand("battery", "full verification battery");
  std::uint64_t battery_seed = 7;
  int battery_count = 50;
  battery_cmd->add_option("--seed", battery_seed, "battery seed");
  battery_cmd->add_option("--count", battery_count,
                          "fixtures per criterion (cyclicity uses 10x)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*decompose_cmd) {
      return run_decompose(decompose_input, method, defaults);
    }
    if (*cyclicity_cmd) return run_cyclicity(cyclicity_input, defaults);
    if (*semigroup_cmd) {
      return run_semigroup(semigroup_input, defaults.epsilon);
    }
    if (*ipsearch_cmd) {
      return run_ipsearch(ipsearch_input, ipsearch_length, ipsearch_bound);
    }
    if (*fixtures_cmd) {
      if (!fixtures_list && fixtures_name.empty()) {
        std::cerr << "fixtures: need --list or --emit NAME\n";
        return 2;
      }
      return run_fixtures(fixtures_list, fixtures_name, fixtures_seed);
    }
    if (*battery_cmd) {
      return run_battery_command(battery_seed, battery_count, defaults);
    }
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedInput& e) {
    std::cerr << "unsupported input: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
