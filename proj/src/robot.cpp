#include "antsim/robot.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace antsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("robot.") + field + ": must be positive");
  }
}
}  // namespace

void RobotParams::validate() const {
  require_positive(mass, "mass");
  require_positive(payload_max, "payload_max");
  require_positive(length, "length");
  require_positive(width, "width");
  require_positive(height, "height");
  require_positive(track, "track");
  require_positive(v_max, "v_max");
  require_positive(motor_tau, "motor_tau");
  require_positive(stride_length, "stride_length");
  require_positive(battery_capacity, "battery_capacity");
  require_positive(idle_power, "idle_power");
  require_positive(moving_power, "moving_power");
  for (int i = 0; i < 3; ++i) require_positive(inertia[i], "inertia");
  if (!com.allFinite()) throw std::invalid_argument("robot.com: must be finite");
}

void check_payload(double payload, const RobotParams& params) {
  if (!(payload >= 0.0)) throw std::invalid_argument("payload: must be >= 0");
  if (payload > params.payload_max) {
    std::ostringstream msg;
    msg << "payload exceeds " << params.payload_max << " kg (got " << payload << " kg)";
    throw std::invalid_argument(msg.str());
  }
}

MotorCommands mode_to_motor_commands(CommandMode mode, double v_max) noexcept {
  switch (mode) {
    case CommandMode::Forward: return {v_max, v_max};
    case CommandMode::Backward: return {-v_max, -v_max};
    case CommandMode::TurnRight: return {v_max, -v_max};
    case CommandMode::TurnLeft: return {-v_max, v_max};
    case CommandMode::Stop: return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

double wrap_angle(double angle) noexcept {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

MotorState motor_step(const MotorState& m, double u, double dt, const RobotParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("motor_step: dt must be > 0");
  const double cmd = std::clamp(u, -params.v_max, params.v_max);
  MotorState out;
  out.command_speed = cmd;
  out.actual_speed = std::clamp(lag_speed(m.actual_speed, cmd, dt, params.motor_tau),
                                -params.v_max, params.v_max);
  const double travel = lag_travel(m.actual_speed, cmd, dt, params.motor_tau);
  out.shaft_angle = wrap_angle(m.shaft_angle + kTwoPi * travel / params.stride_length);
  return out;
}

LegLayout LegLayout::antbot() {
  constexpr double pi = std::numbers::pi;
  const Vector2d out_left{0.0, 0.02};
  const Vector2d out_right{0.0, -0.02};
  return {{{
      {LegId::LF, Side::Left, 0.0, {0.07, 0.05}, out_left},
      {LegId::LM, Side::Left, pi, {0.0, 0.05}, out_left},
      {LegId::LR, Side::Left, 0.0, {-0.07, 0.05}, out_left},
      {LegId::RF, Side::Right, pi, {0.07, -0.05}, out_right},
      {LegId::RM, Side::Right, 0.0, {0.0, -0.05}, out_right},
      {LegId::RR, Side::Right, pi, {-0.07, -0.05}, out_right},
  }}};
}

GaitSnapshot leg_phases(double left_angle, double right_angle, const LegLayout& layout) {
  GaitSnapshot snap;
  for (std::size_t i = 0; i < layout.legs.size(); ++i) {
    const Leg& leg = layout.legs[i];
    const double crank = leg.side == Side::Left ? left_angle : right_angle;
    if (wrap_angle(crank + leg.phase_offset) < std::numbers::pi) {
      snap.stance_mask |= static_cast<std::uint8_t>(1u << i);
      snap.stance_feet.push_back(leg.foot());
    }
  }
  return snap;
}

int read_potentiometer(double shaft_angle) noexcept {
  const double counts = std::floor(1024.0 * shaft_angle / kTwoPi);
  return static_cast<int>(std::clamp(counts, 0.0, 1023.0));
}

double battery_step(double energy_wh, bool moving, double dt, const RobotParams& params) noexcept {
  const double power = moving ? params.moving_power : params.idle_power;
  return std::max(0.0, energy_wh - power * dt / 3600.0);
}

Robot::Robot(RobotParams params, double payload)
    : params_(std::move(params)), layout_(LegLayout::antbot()) {
  params_.validate();
  check_payload(payload, params_);
  state_.battery_energy = params_.battery_capacity;
  state_.payload = payload;
}

void Robot::step(CommandMode mode, double dt) {
  MotorCommands u = mode_to_motor_commands(mode, params_.v_max);
  if (depleted()) u = {0.0, 0.0};

  const MotorState& l0 = state_.left;
  const MotorState& r0 = state_.right;
  const double v_left = lag_travel(l0.actual_speed, u.left, dt, params_.motor_tau) / dt;
  const double v_right = lag_travel(r0.actual_speed, u.right, dt, params_.motor_tau) / dt;
  const auto twist = body_velocity(v_left, v_right, params_.track);

  state_.pose = integrate_pose(state_.pose, twist.v, twist.omega, dt);
  state_.left = motor_step(l0, u.left, dt, params_);
  state_.right = motor_step(r0, u.right, dt, params_);
  const bool moving = u.left != 0.0 || u.right != 0.0;
  state_.battery_energy = battery_step(state_.battery_energy, moving, dt, params_);
}

GaitSnapshot Robot::gait() const {
  return leg_phases(state_.left.shaft_angle, state_.right.shaft_angle, layout_);
}

double Robot::margin() const {
  const auto snap = gait();
  const Vector2d com_xy = params_.com.head<2>();
  return stability_margin<double>(snap.stance_feet, com_xy);
}

}  // namespace antsim
