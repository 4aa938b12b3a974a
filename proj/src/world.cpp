#include "antsim/world.hpp"

#include <chrono>
#include <cmath>

namespace antsim {

using nlohmann::json;

namespace {

TxConfig tx_config(const Scenario& s) {
  TxConfig cfg = s.tx;
  cfg.codec = s.codec;
  return cfg;
}

AlterationMap compensation(const Scenario& s) {
  return s.rx.compensate ? s.link.alteration : AlterationMap{};
}

}  // namespace

json to_json(const TelemetrySample& s) {
  return {
      {"t", s.t},
      {"x", s.pose.position.x()},
      {"y", s.pose.position.y()},
      {"heading", s.pose.heading},
      {"vx", s.vx},
      {"vy", s.vy},
      {"omega", s.omega},
      {"mode", mode_name(s.mode)},
      {"motor_left", s.motor_left},
      {"motor_right", s.motor_right},
      {"pot_left", s.pot_left},
      {"pot_right", s.pot_right},
      {"stance", s.stance},
      {"margin", s.margin ? json(*s.margin) : json(nullptr)},
      {"battery", s.battery},
      {"sent", s.link.sent},
      {"delivered", s.link.delivered},
      {"dropped", s.link.dropped},
      {"noise_emitted", s.link.noise_emitted},
      {"frames_ok", s.rx.frames_ok},
      {"noise_rejected", s.rx.noise_rejected},
      {"mode_changes", s.rx.mode_changes},
      {"false_accepts", s.false_accepts},
  };
}

json to_json(const RunSummary& s) {
  return {
      {"distance", s.distance},
      {"heading_change", s.heading_change},
      {"final_x", s.final_pose.position.x()},
      {"final_y", s.final_pose.position.y()},
      {"final_heading", s.final_pose.heading},
      {"false_accepts", s.false_accepts},
      {"noise_delivered", s.noise_delivered},
      {"noise_rejected", s.noise_rejected},
      {"frames_ok", s.frames_ok},
      {"samples", s.samples},
      {"final_battery", s.final_battery},
      {"wall_seconds", s.wall_seconds},
  };
}

World::World(const Scenario& scenario)
    : scenario_((scenario.validate(), scenario)),
      tx_(tx_config(scenario_)),
      link_(scenario_.link),
      rx_(scenario_.codec, compensation(scenario_), scenario_.rx.watchdog_timeout),
      robot_(scenario_.robot, scenario_.payload) {}

void World::submit(CommandMode mode) { tx_.command(mode, now_); }

std::optional<TelemetrySample> World::tick() {
  const SimTime t = now_;
  const auto& script = scenario_.script;
  while (next_script_ < script.size() && script[next_script_].t <= t) {
    submit(script[next_script_++].mode);
  }

  const auto bytes = tx_.step(t);
  link_.send(bytes, t);
  for (const Delivery& d : link_.step(t)) {
    noise_history_ = static_cast<std::uint8_t>((noise_history_ << 1) | (d.noise ? 1 : 0));
    rx_.ingest(d.value, d.t);
    // A frame is always the last three bytes pushed.
    if (rx_.last_event() == ParseEventKind::Frame && (noise_history_ & 0b111) != 0) {
      ++false_accepts_;
    }
  }
  rx_.watchdog(t);

  const auto before = robot_.state().pose;
  const double dt = to_seconds(scenario_.tick);
  robot_.step(rx_.mode(), dt);
  const auto& after = robot_.state().pose;
  distance_ += (after.position - before.position).norm();
  heading_change_ += std::abs(after.heading - before.heading);

  now_ += scenario_.tick;
  if (now_.count() % scenario_.report_interval.count() != 0) return std::nullopt;
  TelemetrySample s = sample();
  last_report_pose_ = robot_.state().pose;
  return s;
}

TelemetrySample World::sample() const {
  const RobotState& st = robot_.state();
  const double interval = to_seconds(scenario_.report_interval);
  const auto gait = robot_.gait();
  const double margin = stability_margin<double>(gait.stance_feet, robot_.params().com.head<2>());

  TelemetrySample s;
  s.t = to_seconds(now_);
  s.pose = st.pose;
  s.vx = (st.pose.position.x() - last_report_pose_.position.x()) / interval;
  s.vy = (st.pose.position.y() - last_report_pose_.position.y()) / interval;
  s.omega = (st.pose.heading - last_report_pose_.heading) / interval;
  s.mode = rx_.mode();
  s.motor_left = st.left.actual_speed;
  s.motor_right = st.right.actual_speed;
  s.pot_left = read_potentiometer(st.left.shaft_angle);
  s.pot_right = read_potentiometer(st.right.shaft_angle);
  s.stance = gait.stance_mask;
  if (std::isfinite(margin)) s.margin = margin;
  s.battery = st.battery_energy;
  s.link = link_.stats();
  s.rx = rx_.counters();
  s.false_accepts = false_accepts_;
  return s;
}

RunSummary run_scenario(const Scenario& scenario, std::ostream* out) {
  const auto wall_start = std::chrono::steady_clock::now();
  World world(scenario);
  RunSummary summary;
  while (world.now() < scenario.duration) {
    if (auto s = world.tick()) {
      ++summary.samples;
      if (out != nullptr) *out << to_json(*s).dump() << '\n';
    }
  }
  summary.distance = world.distance();
  summary.heading_change = world.heading_change();
  summary.final_pose = world.robot().state().pose;
  summary.false_accepts = world.false_accepts();
  summary.noise_delivered = world.link().stats().noise_emitted;
  summary.noise_rejected = world.receiver().counters().noise_rejected;
  summary.frames_ok = world.receiver().counters().frames_ok;
  summary.final_battery = world.robot().state().battery_energy;
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return summary;
}

}  // namespace antsim
