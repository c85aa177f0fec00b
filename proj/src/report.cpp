#include "darboux/report.hpp"

namespace darboux {

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["value"] = c.value;
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    j["checks"].push_back(cj);
  }
  j["pass"] = pass();
  return j;
}

}  // namespace darboux
