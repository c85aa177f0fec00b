#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace darboux {

struct CheckLine {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Machine-readable run report: {command, config, checks:[...], pass}.
// Serialization is key-ordered and uses shortest-roundtrip doubles, so the
// same config and seed reproduce byte-identical output.
struct RunReport {
  std::string command;
  nlohmann::ordered_json config;
  std::vector<CheckLine> checks;

  // value must not exceed tolerance.
  void require_below(const std::string& name, double value, double tolerance) {
    checks.push_back({name, value, tolerance, value <= tolerance});
  }
  // value must be at least tolerance.
  void require_above(const std::string& name, double value, double threshold) {
    checks.push_back({name, value, threshold, value >= threshold});
  }
  void require(const std::string& name, bool ok, double value = 0.0, double tolerance = 0.0) {
    checks.push_back({name, value, tolerance, ok});
  }

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  nlohmann::ordered_json to_json() const;
  std::string dump() const { return to_json().dump(2) + "\n"; }
};

}  // namespace darboux
