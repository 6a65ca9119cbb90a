#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "terranav/costmap.hpp"

namespace terranav::planner {

struct EnergyModel {
  double p_drive = 45.0;  // W
  double v_drive = 0.3;   // m/s

  /// Energy per meter of ground travel, J/m.
  double c_d() const { return p_drive / v_drive; }
};

enum class Preset { Standard, Offline };

struct PlannerConfig {
  double w_t = 20.0;
  /// Energy term override; when set it replaces EnergyModel::c_d().
  std::optional<double> c_d_override;
  int unknown_cost_value = 50;
  bool unknown_blocked = false;
  double timeout_s = 5.0;
  std::size_t max_expansions = 0;  // 0 = unlimited
  double replan_rate = 5.0;        // Hz

  double energy_per_meter(const EnergyModel& e) const { return c_d_override ? *c_d_override : e.c_d(); }
  /// Effective cost of a stored cell value, or nullopt when impassable.
  std::optional<int> effective_cost(int stored) const;

  static PlannerConfig preset(Preset p);
};

std::optional<Preset> preset_from_name(std::string_view name);
std::string_view preset_name(Preset p);

using Waypoint = std::array<double, 2>;

struct PlanResult {
  std::vector<Waypoint> waypoints;
  double g_total = 0.0;             // accumulated hybrid cost from the search
  double distance_total = 0.0;      // m
  double terrain_cost_total = 0.0;  // sum of d * w_t * T
  double terrain_exposure = 0.0;    // sum of d * T, independent of w_t
  bool pruned = false;
  std::size_t expansions = 0;
};

enum class Failure { None, StartOutOfBounds, GoalOutOfBounds, StartLethal, GoalLethal, NoPath, Timeout };

std::string_view failure_name(Failure f);

struct PlanOutcome {
  std::optional<PlanResult> result;
  Failure cause = Failure::None;
  std::size_t expansions = 0;

  bool ok() const { return result.has_value(); }
};

/// d * (1 + w_t * cost/100 + c_d).
double edge_cost(double d, int cell_cost, const PlannerConfig& cfg, const EnergyModel& energy);

/// A* over the 8-connected costmap with the hybrid edge cost of the entered
/// cell and a Euclidean heuristic in meters. Duplicate queue entries are
/// allowed and filtered by the closed set on pop. Ties on f go to lower h,
/// then to the earlier push.
PlanOutcome plan(const costmap::WorldCostmap& world, Waypoint start, Waypoint goal,
                 const PlannerConfig& cfg = {}, const EnergyModel& energy = {});

struct PathMetrics {
  double distance = 0.0;
  double terrain_cost = 0.0;
  double terrain_exposure = 0.0;
  int max_cell_cost = 0;
  /// Length-weighted hybrid cost, sum over cells of len * (1 + w_t*T + c_d).
  double hybrid_cost = 0.0;
  bool crosses_lethal = false;
};

/// Segment-wise integration over the cells each segment passes through.
PathMetrics path_metrics(const std::vector<Waypoint>& waypoints, const costmap::WorldCostmap& world,
                         const PlannerConfig& cfg = {}, const EnergyModel& energy = {});

/// Removes interior waypoints whose neighbors see each other through
/// non-lethal cells, provided the shortcut does not raise the integrated
/// hybrid cost. Endpoints are kept.
PlanResult prune_line_of_sight(const PlanResult& result, const costmap::WorldCostmap& world,
                               const PlannerConfig& cfg = {}, const EnergyModel& energy = {});

/// Metrics of a single segment; used by pruning and exposed for tests.
PathMetrics segment_metrics(const Waypoint& a, const Waypoint& b, const costmap::WorldCostmap& world,
                            const PlannerConfig& cfg, const EnergyModel& energy);

/// Terrain-aware plan against the same query at w_t = 0. Deltas compare the
/// aware plan to the baseline; terrain uses the weight-free exposure.
struct Comparison {
  PlanResult aware;
  PlanResult baseline;
  double distance_increase_pct = 0.0;
  double terrain_reduction_pct = 0.0;
};

struct CompareOutcome {
  std::optional<Comparison> comparison;
  Failure cause = Failure::None;
};

CompareOutcome compare(const costmap::WorldCostmap& world, Waypoint start, Waypoint goal,
                       const PlannerConfig& cfg = {}, const EnergyModel& energy = {});

}  // namespace terranav::planner
