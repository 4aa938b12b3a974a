#pragma once

#include <cstdint>
#include <optional>
#include <ostream>

#include "antsim/link.hpp"
#include "antsim/robot.hpp"
#include "antsim/rx.hpp"
#include "antsim/scenario.hpp"
#include "antsim/tx.hpp"
#include "json.hpp"

namespace antsim {

/// Snapshot emitted once per reporting interval. Velocities are means over the
/// interval just ended, so summing `vx * interval` reproduces the pose.
struct TelemetrySample {
  double t = 0.0;
  Pose2<double> pose;
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
  CommandMode mode = CommandMode::Stop;
  double motor_left = 0.0;
  double motor_right = 0.0;
  int pot_left = 0;
  int pot_right = 0;
  std::uint8_t stance = 0;
  std::optional<double> margin;  // empty when the support polygon is degenerate
  double battery = 0.0;
  LinkCounters link;
  RxCounters rx;
  std::uint64_t false_accepts = 0;
};

nlohmann::json to_json(const TelemetrySample& s);

struct RunSummary {
  double distance = 0.0;        // path length, m
  double heading_change = 0.0;  // accumulated |rotation|, rad
  Pose2<double> final_pose;
  std::uint64_t false_accepts = 0;
  std::uint64_t noise_delivered = 0;
  std::uint64_t noise_rejected = 0;
  std::uint64_t frames_ok = 0;
  std::uint64_t samples = 0;
  double final_battery = 0.0;
  double wall_seconds = 0.0;
};

nlohmann::json to_json(const RunSummary& s);

/// The full transmitter -> link -> receiver -> robot pipeline on one clock.
class World {
 public:
  explicit World(const Scenario& scenario);

  /// Hand a command to the transmitter at the current time.
  void submit(CommandMode mode);

  /// One tick: script, tx, link, rx, watchdog, then robot dynamics over [now, now + tick).
  /// Returns a sample when the advanced clock lands on a reporting boundary.
  std::optional<TelemetrySample> tick();

  TelemetrySample sample() const;

  SimTime now() const noexcept { return now_; }
  const Scenario& scenario() const noexcept { return scenario_; }
  const Robot& robot() const noexcept { return robot_; }
  const Link& link() const noexcept { return link_; }
  const Receiver& receiver() const noexcept { return rx_; }
  Transmitter& transmitter() noexcept { return tx_; }

  void reconfigure_link(const LinkConfig& cfg) { link_.reconfigure(cfg); }

  double distance() const noexcept { return distance_; }
  double heading_change() const noexcept { return heading_change_; }
  std::uint64_t false_accepts() const noexcept { return false_accepts_; }

 private:
  Scenario scenario_;
  Transmitter tx_;
  Link link_;
  Receiver rx_;
  Robot robot_;
  SimTime now_{0};
  std::size_t next_script_ = 0;
  std::uint8_t noise_history_ = 0;  // bit 0: most recent byte at the receiver was noise
  std::uint64_t false_accepts_ = 0;
  double distance_ = 0.0;
  double heading_change_ = 0.0;
  Pose2<double> last_report_pose_;
};

/// Run to the scenario duration, writing one NDJSON line per sample to `out` when given.
RunSummary run_scenario(const Scenario& scenario, std::ostream* out = nullptr);

}  // namespace antsim
