#pragma once

#include <deque>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "terranav/costmap.hpp"
#include "terranav/planner.hpp"

namespace terranav::decision {

struct AerialModel {
  double p_flight = 600.0;    // W
  double v_flight = 1.5;      // m/s
  double c_transform = 300.0; // J per transformation
  double gamma = 0.8;         // hysteresis

  void validate() const;
};

/// Sum over consecutive waypoints of d * c / 2, with c the hybrid cost of the
/// segment integrated over the cells it crosses. nullopt for an empty plan.
std::optional<double> ground_cost(const std::vector<planner::Waypoint>& waypoints,
                                  const costmap::WorldCostmap& world,
                                  const planner::PlannerConfig& cfg = {},
                                  const planner::EnergyModel& energy = {});

double aerial_cost(double d_direct, const AerialModel& model = {});

enum class Cause { None, Cost, Spin, Stuck, RetryLoop, NoPath, Impassable };

std::string_view cause_name(Cause c);

struct FailureConfig {
  double spin_omega = 0.3;     // rad/s
  double spin_v = 0.05;        // m/s
  double spin_duration = 1.0;  // s, strict
  int spin_episodes = 2;
  double stuck_window = 10.0;   // s
  double stuck_progress = 0.1;  // m
  double abort_window = 20.0;   // s
  int abort_count = 2;
  int no_path_count = 2;
  int impassable_cost = 80;  // strict
};

struct Telemetry {
  double omega_z = 0.0;
  double v_x = 0.0;
  double distance_to_goal = 0.0;
};

class FailureMonitor {
 public:
  explicit FailureMonitor(FailureConfig cfg = {});

  void record_abort(double now);
  /// Feeds one planning outcome. max_cost is the largest cell cost along the
  /// path and is ignored when the plan failed.
  void record_plan(bool no_path, int max_cost);

  /// Advances the monitor and returns the first active condition.
  Cause update(const Telemetry& tel, double now);

  void reset();

  int spin_episodes() const { return spin_episodes_; }
  int consecutive_no_path() const { return no_path_; }
  std::size_t recent_aborts() const { return aborts_.size(); }

 private:
  FailureConfig cfg_;
  int spin_episodes_ = 0;
  std::optional<double> spin_start_;
  bool spin_counted_ = false;
  std::deque<std::pair<double, double>> progress_;  // (t, distance_to_goal)
  std::deque<double> aborts_;
  int no_path_ = 0;
  int last_max_cost_ = 0;
};

enum class Mode { Ground, Aerial };

std::string_view mode_name(Mode m);

struct ModeState {
  Mode mode = Mode::Ground;
  double last_switch_time = 0.0;
  Cause last_cause = Cause::None;
};

/// Failure bypasses the comparison; an undefined ground cost counts as +inf.
ModeState select_mode(const ModeState& current, std::optional<double> c_ground, double c_aerial,
                      Cause failure, double now, const AerialModel& model = {});

struct DecisionEvent {
  double t = 0.0;
  Cause cause = Cause::None;
  std::optional<double> c_ground;
  double c_aerial = 0.0;
  Mode before = Mode::Ground;
  Mode after = Mode::Ground;
};

void write_event_header(std::ostream& out);
void write_event(std::ostream& out, const DecisionEvent& e);

}  // namespace terranav::decision
