#include "conelab/cli/scenario.hpp"

namespace conelab::cli {

// Generated at configure time from scenarios/*.json.
extern const char* const kBundledScenarios[];
extern const std::size_t kBundledScenarioCount;

const std::vector<Scenario>& bundled() {
  static const std::vector<Scenario> all = [] {
    std::vector<Scenario> out;
    for (std::size_t i = 0; i < kBundledScenarioCount; ++i) out.push_back(parse_scenario(json::parse(kBundledScenarios[i])));
    return out;
  }();
  return all;
}

}  // namespace conelab::cli
