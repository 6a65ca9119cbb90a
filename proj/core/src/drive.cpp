#include "terranav/drive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace terranav::drive {

void DriveConfig::validate() const {
  if (!(track > 0.0 && wheel_radius > 0.0 && gear_ratio > 0.0)) {
    throw std::invalid_argument("drive: track, wheel radius and gear ratio must be positive");
  }
  if (!(v_limit > 0.0 && omega_limit > 0.0)) throw std::invalid_argument("drive: limits must be positive");
}

Twist clamp_command(const Twist& cmd, const DriveConfig& cfg) {
  double s = 1.0;
  if (std::abs(cmd.v) > cfg.v_limit) s = std::min(s, cfg.v_limit / std::abs(cmd.v));
  if (std::abs(cmd.omega) > cfg.omega_limit) s = std::min(s, cfg.omega_limit / std::abs(cmd.omega));
  if (s == 1.0) return cmd;
  return {cmd.v * s, cmd.omega * s};
}

WheelSpeeds inverse_kinematics(const Twist& cmd, const DriveConfig& cfg) {
  const Twist c = clamp_command(cmd, cfg);
  const double half = 0.5 * c.omega * cfg.track;
  return {c.v - half, c.v + half};
}

Twist forward_kinematics(const WheelSpeeds& w, const DriveConfig& cfg) {
  return {0.5 * (w.left + w.right), (w.right - w.left) / cfg.track};
}

double wheel_rpm(double v_wheel, const DriveConfig& cfg) {
  const double rpm = 60.0 * v_wheel / (2.0 * std::numbers::pi * cfg.wheel_radius * cfg.gear_ratio);
  return std::abs(rpm) < cfg.rpm_deadband ? 0.0 : rpm;
}

Pose2D integrate_odometry(const Pose2D& pose, double ds_left, double ds_right, const DriveConfig& cfg) {
  const double ds = 0.5 * (ds_left + ds_right);
  const double dtheta = (ds_right - ds_left) / cfg.track;
  const double mid = pose.theta + 0.5 * dtheta;
  return {pose.x + ds * std::cos(mid), pose.y + ds * std::sin(mid), normalize_angle(pose.theta + dtheta)};
}

Twist watchdog(const Twist& cmd, double last_command_age_ms, const DriveConfig& cfg) {
  return last_command_age_ms > cfg.timeout_ms ? Twist{} : cmd;
}

void write_tick_header(std::ostream& out) {
  out << "t,v_cmd,omega_cmd,v_clamped,omega_clamped,rpm_left,rpm_right,timed_out\n";
}

void write_tick(std::ostream& out, const TickRecord& r) {
  out << r.t << ',' << r.command.v << ',' << r.command.omega << ',' << r.clamped.v << ','
      << r.clamped.omega << ',' << r.rpm_left << ',' << r.rpm_right << ',' << (r.timed_out ? 1 : 0) << '\n';
}

DriveUnit::DriveUnit(DriveConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void DriveUnit::command(const Twist& cmd, double now_s) {
  last_ = cmd;
  last_stamp_ = now_s;
}

WheelSpeeds DriveUnit::tick(double now_s, TickRecord* rec) {
  const double age_ms = last_stamp_ < 0.0 ? std::numeric_limits<double>::infinity() : (now_s - last_stamp_) * 1000.0;
  const Twist passed = watchdog(last_, age_ms, cfg_);
  const Twist clamped = clamp_command(passed, cfg_);
  const WheelSpeeds raw = inverse_kinematics(clamped, cfg_);
  const double rpm_l = wheel_rpm(raw.left, cfg_), rpm_r = wheel_rpm(raw.right, cfg_);
  // Wheels inside the deadband do not turn.
  const double k = 2.0 * std::numbers::pi * cfg_.wheel_radius * cfg_.gear_ratio / 60.0;
  const WheelSpeeds out{rpm_l * k, rpm_r * k};
  if (rec) {
    rec->t = now_s;
    rec->command = last_;
    rec->clamped = clamped;
    rec->rpm_left = rpm_l;
    rec->rpm_right = rpm_r;
    rec->timed_out = age_ms > cfg_.timeout_ms;
  }
  return out;
}

}  // namespace terranav::drive
