#include "terranav/decision.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace terranav::decision {

void AerialModel::validate() const {
  if (!(p_flight > 0.0 && v_flight > 0.0 && c_transform > 0.0)) {
    throw std::invalid_argument("aerial model: parameters must be positive");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("aerial model: gamma must lie in (0, 1)");
}

std::optional<double> ground_cost(const std::vector<planner::Waypoint>& waypoints,
                                  const costmap::WorldCostmap& world, const planner::PlannerConfig& cfg,
                                  const planner::EnergyModel& energy) {
  if (waypoints.empty()) return std::nullopt;
  double j = 0.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const auto& a = waypoints[i];
    const auto& b = waypoints[i + 1];
    const double d = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double c = planner::segment_metrics(a, b, world, cfg, energy).hybrid_cost;
    j += d * c / 2.0;
  }
  return j;
}

double aerial_cost(double d_direct, const AerialModel& model) {
  if (d_direct < 0.0) throw std::invalid_argument("aerial_cost: negative distance");
  return d_direct * model.p_flight / model.v_flight + 2.0 * model.c_transform;
}

std::string_view cause_name(Cause c) {
  switch (c) {
    case Cause::None: return "none";
    case Cause::Cost: return "cost";
    case Cause::Spin: return "spin";
    case Cause::Stuck: return "stuck";
    case Cause::RetryLoop: return "retry_loop";
    case Cause::NoPath: return "no_path";
    case Cause::Impassable: return "impassable";
  }
  return "unknown";
}

std::string_view mode_name(Mode m) { return m == Mode::Ground ? "ground" : "aerial"; }

FailureMonitor::FailureMonitor(FailureConfig cfg) : cfg_(cfg) {}

void FailureMonitor::record_abort(double now) { aborts_.push_back(now); }

void FailureMonitor::record_plan(bool no_path, int max_cost) {
  if (no_path) {
    ++no_path_;
    return;
  }
  no_path_ = 0;
  last_max_cost_ = max_cost;
}

Cause FailureMonitor::update(const Telemetry& tel, double now) {
  // Spin episodes are counted once, when they outlast the duration.
  if (std::abs(tel.omega_z) > cfg_.spin_omega && std::abs(tel.v_x) < cfg_.spin_v) {
    if (!spin_start_) {
      spin_start_ = now;
      spin_counted_ = false;
    }
    if (!spin_counted_ && now - *spin_start_ > cfg_.spin_duration) {
      ++spin_episodes_;
      spin_counted_ = true;
    }
  } else {
    spin_start_.reset();
  }

  progress_.emplace_back(now, tel.distance_to_goal);
  // Keep one sample at or before the window start as the reference.
  while (progress_.size() >= 2 && progress_[1].first <= now - cfg_.stuck_window) progress_.pop_front();
  while (!aborts_.empty() && aborts_.front() <= now - cfg_.abort_window) aborts_.pop_front();

  if (last_max_cost_ > cfg_.impassable_cost) return Cause::Impassable;
  if (no_path_ >= cfg_.no_path_count) return Cause::NoPath;
  if (static_cast<int>(aborts_.size()) >= cfg_.abort_count) return Cause::RetryLoop;
  if (spin_episodes_ >= cfg_.spin_episodes) return Cause::Spin;
  const auto& ref = progress_.front();
  if (ref.first <= now - cfg_.stuck_window && ref.second - tel.distance_to_goal < cfg_.stuck_progress) {
    return Cause::Stuck;
  }
  return Cause::None;
}

void FailureMonitor::reset() {
  spin_episodes_ = 0;
  spin_start_.reset();
  spin_counted_ = false;
  progress_.clear();
  aborts_.clear();
  no_path_ = 0;
  last_max_cost_ = 0;
}

ModeState select_mode(const ModeState& current, std::optional<double> c_ground, double c_aerial,
                      Cause failure, double now, const AerialModel& model) {
  if (!std::isfinite(c_aerial)) throw std::invalid_argument("select_mode: aerial cost must be finite");
  ModeState next = current;
  if (failure != Cause::None) {
    next.mode = Mode::Aerial;
    next.last_cause = failure;
  } else {
    const double g = c_ground ? *c_ground : std::numeric_limits<double>::infinity();
    if (current.mode == Mode::Ground && c_aerial < g) {
      next.mode = Mode::Aerial;
      next.last_cause = Cause::Cost;
    } else if (current.mode == Mode::Aerial && g < model.gamma * c_aerial) {
      next.mode = Mode::Ground;
      next.last_cause = Cause::Cost;
    }
  }
  if (next.mode != current.mode) next.last_switch_time = now;
  return next;
}

void write_event_header(std::ostream& out) { out << "t,cause,c_ground,c_aerial,mode_before,mode_after\n"; }

void write_event(std::ostream& out, const DecisionEvent& e) {
  out << e.t << ',' << cause_name(e.cause) << ',';
  if (e.c_ground) {
    out << *e.c_ground;
  } else {
    out << "inf";
  }
  out << ',' << e.c_aerial << ',' << mode_name(e.before) << ',' << mode_name(e.after) << '\n';
}

}  // namespace terranav::decision
