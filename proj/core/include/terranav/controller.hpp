#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "terranav/costmap.hpp"
#include "terranav/geometry.hpp"
#include "terranav/planner.hpp"

namespace terranav::control {

struct ControllerConfig {
  double v_min = -0.3;  // m/s, reverse cap
  double v_max = 0.5;
  double omega_min = -1.0;  // rad/s
  double omega_max = 1.0;
  double a_max = 0.5;      // m/s^2
  double alpha_max = 1.0;  // rad/s^2
  double dt_control = 0.05;
  double horizon = 1.5;
  double rollout_step = 0.1;
  int samples_v = 11;
  int samples_omega = 21;
  double w_path = 1.0;
  double w_goal = 1.0;
  double w_align = 0.5;
  double w_obs = 2.0;
  double min_clearance = 0.2;  // m
  double lookahead = 2.0;      // m
  int unknown_cost = 50;       // cost used for unknown cells by the obstacle critic

  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x, double eps = 1e-12) const { return x >= lo - eps && x <= hi + eps; }
};

struct Window {
  Interval v;
  Interval omega;
};

/// Velocities reachable within one control period, intersected with the
/// limits. When the current velocity lies so far outside the limits that the
/// intersection is empty, the interval collapses onto the nearest limit.
Window dynamic_window(const Twist& current, const ControllerConfig& cfg);

struct Trajectory {
  Twist command;
  std::vector<Pose2D> states;  // start pose first

  const Pose2D& end() const { return states.back(); }
};

Trajectory rollout(const Twist& command, const Pose2D& start, const ControllerConfig& cfg);

struct Score {
  double path = 0.0;
  double goal = 0.0;
  double align = 0.0;
  double obs = 0.0;
  double total = 0.0;
};

/// Weighted critic sum, or nullopt when a state is lethal or violates the
/// clearance disc.
std::optional<Score> score(const Trajectory& traj, const std::vector<planner::Waypoint>& path,
                           const planner::Waypoint& goal, const costmap::WorldCostmap& local_cost,
                           const ControllerConfig& cfg);

struct Selection {
  Twist command;
  Score score;
};

/// Minimum-J command over the sample grid; nullopt when every sample is
/// rejected.
std::optional<Selection> select_command(const Twist& current, const Pose2D& pose,
                                        const std::vector<planner::Waypoint>& path,
                                        const planner::Waypoint& goal,
                                        const costmap::WorldCostmap& local_cost,
                                        const ControllerConfig& cfg);

}  // namespace terranav::control
