#include "koehler/report.hpp"

#include <algorithm>
#include <cstdint>

namespace koehler {

nlohmann::json CheckBlock::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["status"] = status;
  j["residuals"] = residuals;
  j["thresholds"] = thresholds;
  j["certificates"] = certificates;
  return j;
}

bool Report::all_pass() const {
  return std::none_of(blocks.begin(), blocks.end(),
                      [](const CheckBlock& b) { return b.status == "fail"; });
}

const CheckBlock* Report::first_failure() const {
  for (const auto& b : blocks) {
    if (b.status == "fail") return &b;
  }
  return nullptr;
}

nlohmann::json Report::to_json() const {
  std::vector<const CheckBlock*> ordered;
  ordered.reserve(blocks.size());
  for (const auto& b : blocks) ordered.push_back(&b);
  std::sort(ordered.begin(), ordered.end(),
            [](const CheckBlock* a, const CheckBlock* b) {
              return a->name < b->name;
            });

  nlohmann::json j;
  j["schema"] = schema;
  j["tool_version"] = tool_version;
  j["input_digest"] = input_digest;
  j["analysis"] = analysis;
  j["blocks"] = nlohmann::json::array();
  for (const CheckBlock* b : ordered) j["blocks"].push_back(b->to_json());
  j["wall_time_ms"] = wall_time_ms;
  return j;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

}  // namespace koehler
