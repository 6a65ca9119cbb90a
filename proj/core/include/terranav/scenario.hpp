#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "terranav/ascii_grid.hpp"
#include "terranav/controller.hpp"
#include "terranav/costmap.hpp"
#include "terranav/decision.hpp"
#include "terranav/drive.hpp"
#include "terranav/elevation.hpp"
#include "terranav/geometry.hpp"
#include "terranav/planner.hpp"
#include "terranav/traversability.hpp"

namespace terranav::sim {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Bounds {
  double x_min = -10.0;
  double y_min = -10.0;
  double x_max = 10.0;
  double y_max = 10.0;

  bool contains(double x, double y) const { return x >= x_min && x <= x_max && y >= y_min && y <= y_max; }
};

struct BoxFeature {
  double x = 0, y = 0, w = 0, h = 0;  // lower-left corner and extent
  double height = 0;
};

struct ClothFeature {
  double x = 0, y = 0, w = 0, h = 0;
  double amplitude = 0.02;
  double traversability = 0.3;  // tag used by the truth render
};

struct WallFeature {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double thickness = 0.2;
  double height = 0.25;
};

enum class BaseKind { Flat, Ramp, File };

struct TerrainSpec {
  BaseKind base = BaseKind::Flat;
  double ramp_slope = 0.0;  // dz/dx
  std::optional<AsciiGrid> base_grid;
  std::vector<BoxFeature> boxes;
  std::vector<ClothFeature> cloths;
  std::vector<WallFeature> walls;
  std::uint64_t seed = 1;
  Bounds bounds;
};

struct SensorSpec {
  double mount_x = 0.1;  // m forward of the base
  double height = 0.45;  // m above the base
  double tilt_deg = 30.0;
  double elevation_min_deg = -52.0;  // sensor-frame band
  double elevation_max_deg = 7.0;
  int rays = 1500;
  double max_range = 10.0;
  double noise = 0.0;  // range sigma, m
  double rate = 10.0;  // Hz
  double voxel = 0.0;  // downsampling voxel, 0 disables
};

struct MotionNoise {
  double slip_sigma = 0.0;         // per-side multiplicative slip spread
  double drift_rate = 0.0;         // localization random walk, m/sqrt(s)
  std::optional<double> slip_left;  // fixed factors override the sampled ones
  std::optional<double> slip_right;
};

enum class Expect { Arrival, Recommendation };

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  double duration = 60.0;  // s
  TerrainSpec terrain;
  Pose2D start;
  std::vector<planner::Waypoint> goals;
  SensorSpec sensor;
  MotionNoise noise;
  planner::Preset preset = planner::Preset::Standard;
  planner::PlannerConfig planner = planner::PlannerConfig::preset(planner::Preset::Standard);
  planner::EnergyModel energy;
  control::ControllerConfig controller;
  drive::DriveConfig drive;
  costmap::CostmapConfig costmap;
  elevation::SensorNoiseModel elevation;
  elevation::InflationModel inflation;
  traversability::FallbackParams fallback;
  decision::AerialModel aerial;
  decision::FailureConfig failure;
  std::filesystem::path weights;  // CNN weights; empty selects the geometric estimator
  double map_follow_margin = 0.5;  // m
  double arrival_tolerance = 0.15;
  double decision_rate = 10.0;
  bool stop_on_recommendation = true;
  Expect expect = Expect::Arrival;

  void validate() const;
};

/// Parses a YAML scenario. Relative paths inside it resolve against `base_dir`.
ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace terranav::sim
