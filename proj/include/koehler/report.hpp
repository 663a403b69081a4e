#ifndef KOEHLER_REPORT_HPP_
#define KOEHLER_REPORT_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace koehler {

inline constexpr const char* kToolVersion = "0.1.0";

/// One named check with its residuals and the thresholds they were judged
/// against. `status` is "fail" exactly when some residual exceeds its
/// documented threshold.
struct CheckBlock {
  std::string name;
  std::string status = "pass";  // pass | fail | skip
  std::map<std::string, double> residuals;
  std::map<std::string, double> thresholds;
  nlohmann::json certificates = nlohmann::json::object();

  void record(const std::string& key, double residual, double threshold) {
    residuals[key] = residual;
    thresholds[key] = threshold;
    if (residual > threshold) status = "fail";
  }

  nlohmann::json to_json() const;
};

struct Report {
  int schema = 1;
  std::string tool_version = kToolVersion;
  std::string input_digest;
  std::string analysis;
  std::vector<CheckBlock> blocks;
  double wall_time_ms = 0.0;

  bool all_pass() const;
  const CheckBlock* first_failure() const;

  /// Blocks are emitted sorted by name so reports are canonical.
  nlohmann::json to_json() const;
};

/// FNV-1a 64-bit digest, hex encoded; used as the input digest.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace koehler

#endif  // KOEHLER_REPORT_HPP_
