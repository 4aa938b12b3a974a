#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "antsim/codec.hpp"
#include "antsim/link.hpp"
#include "antsim/robot.hpp"
#include "antsim/time.hpp"
#include "antsim/tx.hpp"
#include "json.hpp"

namespace antsim {

/// Load-time validation failure. The message starts with the offending field.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScriptEntry {
  SimTime t;
  CommandMode mode;
};

struct RxSettings {
  SimTime watchdog_timeout = 500ms;
  bool compensate = true;  // receiver inverts the link's alteration map
};

struct Scenario {
  std::uint64_t seed = 0;
  SimTime duration = 10s;
  SimTime tick = 1ms;
  SimTime report_interval = 50ms;
  double payload = 0.0;
  CodecConfig codec;
  LinkConfig link;
  TxConfig tx;
  RxSettings rx;
  RobotParams robot;
  std::vector<ScriptEntry> script;

  /// Throws ScenarioError on the first violated constraint.
  void validate() const;
};

/// Parse and validate. Unknown keys are rejected. The link RNG seed defaults to
/// the top-level seed.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace antsim
