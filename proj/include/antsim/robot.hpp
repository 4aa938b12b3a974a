#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "antsim/codec.hpp"
#include "antsim/kinematics.hpp"

namespace antsim {

/// AntBot I physical parameters. Defaults are the published prototype figures;
/// motor lag, stride length and battery capacity are modelling assumptions.
struct RobotParams {
  double mass = 0.230;         // kg, without electronics board
  double payload_max = 0.075;  // kg
  double length = 0.155;       // m
  double width = 0.10;         // m
  double height = 0.10;        // m
  double track = 0.10;         // m, left-right drive separation
  double v_max = 0.1;          // m/s
  Vector3d com{-0.00573, -0.00925, 0.00413};       // m, body frame at geometric center
  Vector3d inertia{0.000419, 0.000768, 0.000931};  // kg m^2, principal Ixx, Iyy, Izz
  double motor_tau = 0.1;        // s
  double stride_length = 0.04;   // m of travel per crank revolution
  double battery_capacity = 9.9;  // Wh, two 9 V cells
  double idle_power = 0.2;        // W
  double moving_power = 0.9;      // W

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

/// Throws std::invalid_argument("payload exceeds 0.075 kg ...") above the limit.
void check_payload(double payload, const RobotParams& params);

struct MotorCommands {
  double left;
  double right;
};

MotorCommands mode_to_motor_commands(CommandMode mode, double v_max) noexcept;

struct MotorState {
  double command_speed = 0.0;
  double actual_speed = 0.0;
  double shaft_angle = 0.0;  // [0, 2pi)
};

/// Wrap into [0, 2pi).
double wrap_angle(double angle) noexcept;

/// Exact first-order lag update; the crank turns one revolution per `stride_length` travelled.
MotorState motor_step(const MotorState& m, double u, double dt, const RobotParams& params);

enum class Side : std::uint8_t { Left, Right };

enum class LegId : std::uint8_t { LF, LM, LR, RF, RM, RR };

struct Leg {
  LegId id;
  Side side;
  double phase_offset;  // rad
  Vector2d hip;          // body frame, x forward, y left
  Vector2d foot_offset;  // nominal foot position relative to hip

  Vector2d foot() const { return hip + foot_offset; }
};

/// Six legs, three per drive motor.
struct LegLayout {
  std::array<Leg, 6> legs;

  /// Left side on motor L with offsets (0, pi, 0), right side (pi, 0, pi);
  /// hips at x = +0.07, 0, -0.07 and y = +-0.05, feet 0.02 m outboard.
  static LegLayout antbot();
};

struct GaitSnapshot {
  std::uint8_t stance_mask = 0;  // bit i set: legs[i] in stance
  std::vector<Vector2d> stance_feet;

  int stance_count() const noexcept { return std::popcount(stance_mask); }
};

/// Leg i is in stance iff (crank angle of its motor + offset) mod 2pi lies in [0, pi).
GaitSnapshot leg_phases(double left_angle, double right_angle, const LegLayout& layout);

/// 10-bit ADC reading of a single-turn potentiometer on the crank shaft.
int read_potentiometer(double shaft_angle) noexcept;

/// Drains idle or moving power; floors at zero.
double battery_step(double energy_wh, bool moving, double dt, const RobotParams& params) noexcept;

struct RobotState {
  Pose2<double> pose;
  MotorState left;
  MotorState right;
  double battery_energy = 0.0;  // Wh
  double payload = 0.0;         // kg
};

/// Quasi-static differential-drive model of the two-motor hexapod.
class Robot {
 public:
  explicit Robot(RobotParams params, double payload = 0.0);

  /// Advance by `dt` under the latched mode.
  void step(CommandMode mode, double dt);

  const RobotState& state() const noexcept { return state_; }
  const RobotParams& params() const noexcept { return params_; }
  const LegLayout& layout() const noexcept { return layout_; }

  GaitSnapshot gait() const;
  double margin() const;
  double total_mass() const noexcept { return params_.mass + state_.payload; }
  bool depleted() const noexcept { return state_.battery_energy <= 0.0; }

 private:
  RobotParams params_;
  LegLayout layout_;
  RobotState state_;
};

}  // namespace antsim
