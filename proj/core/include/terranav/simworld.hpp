#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "terranav/costmap.hpp"
#include "terranav/decision.hpp"
#include "terranav/drive.hpp"
#include "terranav/geometry.hpp"
#include "terranav/grid_map.hpp"
#include "terranav/planner.hpp"
#include "terranav/scenario.hpp"

namespace terranav::sim {

/// Seeded generator for an independent stream of one run.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// Heightfield built from a TerrainSpec. Cloth relief is a seeded sum of
/// plane waves bounded by the cloth amplitude.
class Terrain {
 public:
  explicit Terrain(TerrainSpec spec);

  double height(double x, double y) const;
  /// Upper bound of height() over the world.
  double max_height() const { return max_height_; }
  /// Reference traversability: 0 on boxes and walls, the cloth tag on cloth,
  /// 1 elsewhere. The lowest value wins where features overlap.
  double traversability(double x, double y) const;
  const TerrainSpec& spec() const { return spec_; }

 private:
  struct Wave {
    double kx, ky, phase, weight;
  };
  double base(double x, double y) const;

  TerrainSpec spec_;
  std::vector<std::vector<Wave>> cloth_waves_;
  double max_height_ = 0.0;
};

double sample_height(const Terrain& terrain, double x, double y);

/// Traversability layer of the reference terrain over the world bounds.
GridMap render_truth(const Terrain& terrain, double resolution);

/// Sensor position in the world for a base pose standing on the terrain.
Point3 sensor_origin(const Terrain& terrain, const SensorSpec& sensor, const Pose2D& pose);

/// Unit ray direction in the world for a sensor-frame azimuth and elevation.
Point3 ray_direction(const SensorSpec& sensor, const Pose2D& pose, double azimuth, double elevation);

/// First terrain crossing along origin + t*dir within max_range, refined by
/// bisection to 1 mm. Rays leaving the world bounds return nothing.
std::optional<double> cast_ray(const Terrain& terrain, const Point3& origin, const Point3& dir, double max_range,
                               double march_step = 0.05);

/// One scan of pseudo-random directions inside the sensor band. Points are in
/// the world frame.
PointCloud raycast_scan(const Terrain& terrain, const SensorSpec& sensor, const Pose2D& pose, std::mt19937_64& rng);

struct RobotState {
  Pose2D truth;
  Pose2D odom;
  Pose2D loc;  // localization feed
  Twist measured;
  drive::WheelState wheels;
  std::array<double, 3> drift{0.0, 0.0, 0.0};  // loc - truth (x, y, theta)
};

/// Integrates slip-scaled arcs into the true pose and raw arcs into odometry.
RobotState step_robot(const RobotState& state, const drive::WheelSpeeds& wheels, double dt,
                      const MotionNoise& noise, const drive::DriveConfig& cfg, std::mt19937_64& rng);

struct TrajectorySample {
  double t = 0.0;
  Pose2D truth;
  Pose2D odom;
  Pose2D loc;
  Twist command;
  Twist measured;
};

struct PlanRecord {
  double t = 0.0;
  planner::Failure cause = planner::Failure::None;
  std::size_t expansions = 0;
  double g_total = 0.0;
  double distance = 0.0;
  double terrain_cost = 0.0;
  std::size_t waypoints = 0;
  int max_cost = 0;
  std::optional<double> ground_cost;
  Pose2D start;
};

struct StageTiming {
  std::string stage;
  std::size_t calls = 0;
  double total_s = 0.0;
  double max_s = 0.0;
};

enum class Outcome { Arrived, Recommendation, Timeout };

std::string_view outcome_name(Outcome o);

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Timeout;
  decision::Cause recommendation_cause = decision::Cause::None;
  double sim_time = 0.0;
  double distance_travelled = 0.0;
  std::size_t goals_reached = 0;
  std::size_t scans = 0;
  std::size_t points_integrated = 0;
  std::size_t trav_evaluations = 0;
  std::size_t aborts = 0;
  std::vector<TrajectorySample> trajectory;
  std::vector<PlanRecord> plans;
  std::vector<decision::DecisionEvent> events;
  std::vector<drive::TickRecord> drive_log;
  costmap::WorldCostmap costmap;
  GridMap local_map;
  std::vector<StageTiming> timings;  // filled only when profiling
  double wall_time_s = 0.0;
};

struct RunOptions {
  bool profile = false;
};

inline constexpr double kBaseRate = 100.0;  // Hz

/// Ticks of the base clock between runs of a stage at `rate`.
int period_ticks(double rate);

RunReport run_loop(const ScenarioConfig& cfg, const RunOptions& opts = {});

bool meets_expectation(const RunReport& report, const ScenarioConfig& cfg);

/// Writes the report files into `dir` (created if needed). Timing goes to
/// timing.csv only when the report carries timings.
void write_report(const RunReport& report, const std::filesystem::path& dir);

}  // namespace terranav::sim
