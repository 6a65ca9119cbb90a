#pragma once

#include <ostream>
#include <utility>

#include "terranav/geometry.hpp"

namespace terranav::drive {

struct DriveConfig {
  double track = 0.47;          // m, L
  double wheel_radius = 0.076;  // m, r
  double gear_ratio = 1.0;
  double v_limit = 1.0;       // m/s
  double omega_limit = 1.0;   // rad/s
  double timeout_ms = 300.0;
  double rpm_deadband = 1.0;
  double loop_rate = 50.0;  // Hz

  void validate() const;
};

struct WheelSpeeds {
  double left = 0.0;   // m/s
  double right = 0.0;  // m/s
};

/// Scales (v, omega) by a common factor so both fit their limits, which keeps
/// the commanded curvature.
Twist clamp_command(const Twist& cmd, const DriveConfig& cfg);

WheelSpeeds inverse_kinematics(const Twist& cmd, const DriveConfig& cfg);
Twist forward_kinematics(const WheelSpeeds& w, const DriveConfig& cfg);

/// Motor RPM for a wheel surface speed, zeroed inside the deadband.
double wheel_rpm(double v_wheel, const DriveConfig& cfg);

Pose2D integrate_odometry(const Pose2D& pose, double ds_left, double ds_right, const DriveConfig& cfg);

/// Zero command once the last command is older than the timeout (strict).
Twist watchdog(const Twist& cmd, double last_command_age_ms, const DriveConfig& cfg);

struct WheelState {
  double arc_left = 0.0;
  double arc_right = 0.0;
};

/// One drive-loop tick as logged.
struct TickRecord {
  double t = 0.0;
  Twist command;
  Twist clamped;
  double rpm_left = 0.0;
  double rpm_right = 0.0;
  bool timed_out = false;
};

void write_tick_header(std::ostream& out);
void write_tick(std::ostream& out, const TickRecord& rec);

/// Drive loop state: takes the latest command with its timestamp and yields
/// wheel speeds each tick.
class DriveUnit {
 public:
  explicit DriveUnit(DriveConfig cfg = {});

  void command(const Twist& cmd, double now_s);
  /// Applies watchdog, clamp and deadband; returns the realized wheel speeds.
  WheelSpeeds tick(double now_s, TickRecord* rec = nullptr);

  const DriveConfig& config() const { return cfg_; }

 private:
  DriveConfig cfg_;
  Twist last_;
  double last_stamp_ = -1.0;
};

}  // namespace terranav::drive
