#include "terranav/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace terranav::control {

using costmap::kLethalCost;
using costmap::kUnknownCost;

void ControllerConfig::validate() const {
  if (!(rollout_step > 0.0 && horizon >= rollout_step)) {
    throw std::invalid_argument("controller: need horizon >= rollout_step > 0");
  }
  if (samples_v < 2 || samples_omega < 2) throw std::invalid_argument("controller: need at least 2 samples per axis");
  if (!(v_min <= v_max && omega_min <= omega_max)) throw std::invalid_argument("controller: inverted limits");
  if (!(dt_control > 0.0)) throw std::invalid_argument("controller: dt_control must be positive");
}

namespace {

Interval reachable(double cur, double acc, double dt, double lo, double hi) {
  Interval w{std::max(cur - acc * dt, lo), std::min(cur + acc * dt, hi)};
  if (w.lo > w.hi) {
    const double edge = cur > hi ? hi : lo;
    w = {edge, edge};
  }
  return w;
}

double sample(const Interval& w, int i, int n) {
  if (i == n - 1) return w.hi;
  return w.lo + (w.hi - w.lo) * static_cast<double>(i) / (n - 1);
}

}  // namespace

Window dynamic_window(const Twist& current, const ControllerConfig& cfg) {
  return {reachable(current.v, cfg.a_max, cfg.dt_control, cfg.v_min, cfg.v_max),
          reachable(current.omega, cfg.alpha_max, cfg.dt_control, cfg.omega_min, cfg.omega_max)};
}

Trajectory rollout(const Twist& command, const Pose2D& start, const ControllerConfig& cfg) {
  Trajectory t;
  t.command = command;
  const int steps = static_cast<int>(std::lround(cfg.horizon / cfg.rollout_step));
  t.states.reserve(steps + 1);
  Pose2D p = start;
  t.states.push_back(p);
  double theta = p.theta;
  for (int k = 0; k < steps; ++k) {
    p.x += command.v * std::cos(theta) * cfg.rollout_step;
    p.y += command.v * std::sin(theta) * cfg.rollout_step;
    theta += command.omega * cfg.rollout_step;
    p.theta = normalize_angle(theta);
    t.states.push_back(p);
  }
  return t;
}

std::optional<Score> score(const Trajectory& traj, const std::vector<planner::Waypoint>& path,
                           const planner::Waypoint& goal, const costmap::WorldCostmap& local_cost,
                           const ControllerConfig& cfg) {
  if (path.empty()) throw std::invalid_argument("score: empty path");
  const double res = local_cost.resolution();
  const int reach = static_cast<int>(std::ceil(cfg.min_clearance / res));
  const double r2 = cfg.min_clearance * cfg.min_clearance;

  int max_cost = 0;
  for (const Pose2D& s : traj.states) {
    const auto here = local_cost.world_to_cell(s.x, s.y);
    if (here) {
      const int c = local_cost.at(*here);
      if (c >= kLethalCost) return std::nullopt;
      max_cost = std::max(max_cost, c == kUnknownCost ? cfg.unknown_cost : c);
    } else {
      max_cost = std::max(max_cost, cfg.unknown_cost);
    }
    // Clearance disc: any lethal cell whose nearest point is within the radius.
    const int r0 = static_cast<int>(std::floor((s.y - local_cost.origin_y()) / res));
    const int c0 = static_cast<int>(std::floor((s.x - local_cost.origin_x()) / res));
    for (int dr = -reach; dr <= reach; ++dr) {
      for (int dc = -reach; dc <= reach; ++dc) {
        const CellIndex idx{r0 + dr, c0 + dc};
        if (!local_cost.contains(idx) || local_cost.at(idx) < kLethalCost) continue;
        const double x_lo = local_cost.origin_x() + idx.col * res, y_lo = local_cost.origin_y() + idx.row * res;
        const double nx = std::clamp(s.x, x_lo, x_lo + res) - s.x;
        const double ny = std::clamp(s.y, y_lo, y_lo + res) - s.y;
        if (nx * nx + ny * ny < r2) return std::nullopt;
      }
    }
  }

  const Pose2D& e = traj.end();
  Score sc;
  sc.path = std::numeric_limits<double>::infinity();
  for (const auto& w : path) sc.path = std::min(sc.path, std::hypot(w[0] - e.x, w[1] - e.y));
  sc.goal = std::hypot(goal[0] - e.x, goal[1] - e.y);
  sc.align = sc.goal > 0.0 ? std::abs(normalize_angle(e.theta - std::atan2(goal[1] - e.y, goal[0] - e.x))) : 0.0;
  sc.obs = max_cost;
  sc.total = cfg.w_path * sc.path + cfg.w_goal * sc.goal + cfg.w_align * sc.align + cfg.w_obs * sc.obs;
  return sc;
}

std::optional<Selection> select_command(const Twist& current, const Pose2D& pose,
                                        const std::vector<planner::Waypoint>& path,
                                        const planner::Waypoint& goal,
                                        const costmap::WorldCostmap& local_cost,
                                        const ControllerConfig& cfg) {
  const Window w = dynamic_window(current, cfg);
  std::optional<Selection> best;
  for (int i = 0; i < cfg.samples_v; ++i) {
    const double v = sample(w.v, i, cfg.samples_v);
    for (int j = 0; j < cfg.samples_omega; ++j) {
      const double om = sample(w.omega, j, cfg.samples_omega);
      const Twist cmd{v, om};
      const auto sc = score(rollout(cmd, pose, cfg), path, goal, local_cost, cfg);
      if (!sc) continue;
      bool better = !best;
      if (best) {
        if (sc->total != best->score.total) {
          better = sc->total < best->score.total;
        } else if (std::abs(om) != std::abs(best->command.omega)) {
          better = std::abs(om) < std::abs(best->command.omega);
        } else {
          better = std::abs(v - current.v) < std::abs(best->command.v - current.v);
        }
      }
      if (better) best = Selection{cmd, *sc};
    }
  }
  return best;
}

}  // namespace terranav::control
