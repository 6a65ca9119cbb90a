#include "terranav/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace terranav::sim {

namespace {

template <class T>
void get(const YAML::Node& node, const char* key, T& out) {
  if (node && node[key]) out = node[key].as<T>();
}

double req(const YAML::Node& node, const char* key, const std::string& where) {
  if (!node[key]) throw ScenarioError(where + ": missing '" + key + "'");
  return node[key].as<double>();
}

void parse_terrain(const YAML::Node& t, TerrainSpec& spec, const std::filesystem::path& base_dir) {
  if (!t) return;
  const auto base = t["base"] ? t["base"].as<std::string>() : std::string("flat");
  if (base == "flat") {
    spec.base = BaseKind::Flat;
  } else if (base == "ramp") {
    spec.base = BaseKind::Ramp;
    get(t, "slope", spec.ramp_slope);
  } else if (base == "file") {
    spec.base = BaseKind::File;
    if (!t["file"]) throw ScenarioError("terrain: base 'file' needs a 'file' entry");
    std::filesystem::path p = t["file"].as<std::string>();
    if (p.is_relative()) p = base_dir / p;
    spec.base_grid = read_ascii_grid(p);
  } else {
    throw ScenarioError("terrain: unknown base '" + base + "'");
  }
  if (!t["features"]) return;
  for (const auto& f : t["features"]) {
    const auto type = f["type"] ? f["type"].as<std::string>() : std::string();
    if (type == "box") {
      spec.boxes.push_back({req(f, "x", "box"), req(f, "y", "box"), req(f, "w", "box"), req(f, "h", "box"),
                            req(f, "height", "box")});
    } else if (type == "cloth") {
      ClothFeature c{req(f, "x", "cloth"), req(f, "y", "cloth"), req(f, "w", "cloth"), req(f, "h", "cloth")};
      get(f, "amplitude", c.amplitude);
      get(f, "traversability", c.traversability);
      spec.cloths.push_back(c);
    } else if (type == "wall") {
      WallFeature w{req(f, "x0", "wall"), req(f, "y0", "wall"), req(f, "x1", "wall"), req(f, "y1", "wall")};
      get(f, "thickness", w.thickness);
      get(f, "height", w.height);
      spec.walls.push_back(w);
    } else {
      throw ScenarioError("terrain: unknown feature type '" + type + "'");
    }
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!(duration > 0.0)) throw ScenarioError("duration must be positive");
  if (goals.empty()) throw ScenarioError("at least one goal is required");
  const auto& b = terrain.bounds;
  if (!(b.x_min < b.x_max && b.y_min < b.y_max)) throw ScenarioError("world bounds are empty");
  if (!b.contains(start.x, start.y)) throw ScenarioError("start lies outside the world");
  for (const auto& g : goals) {
    if (!b.contains(g[0], g[1])) throw ScenarioError("goal lies outside the world");
  }
  for (const auto& box : terrain.boxes) {
    if (!(box.w > 0 && box.h > 0)) throw ScenarioError("box with non-positive extent");
    if (!b.contains(box.x, box.y) || !b.contains(box.x + box.w, box.y + box.h)) {
      throw ScenarioError("box outside the world");
    }
  }
  for (const auto& c : terrain.cloths) {
    if (!(c.w > 0 && c.h > 0 && c.amplitude >= 0)) throw ScenarioError("cloth with bad extent or amplitude");
    if (!(c.traversability >= 0 && c.traversability <= 1)) throw ScenarioError("cloth traversability outside [0,1]");
    if (!b.contains(c.x, c.y) || !b.contains(c.x + c.w, c.y + c.h)) throw ScenarioError("cloth outside the world");
  }
  for (const auto& w : terrain.walls) {
    if (!(w.thickness > 0)) throw ScenarioError("wall thickness must be positive");
    if (!b.contains(w.x0, w.y0) || !b.contains(w.x1, w.y1)) throw ScenarioError("wall outside the world");
  }
  if (sensor.rays < 1) throw ScenarioError("sensor needs at least one ray");
  if (sensor.noise < 0) throw ScenarioError("sensor noise must be non-negative");
  if (!(sensor.rate > 0 && sensor.max_range > 0)) throw ScenarioError("sensor rate and range must be positive");
  if (noise.slip_sigma < 0 || noise.drift_rate < 0) throw ScenarioError("motion noise must be non-negative");
  if ((noise.slip_left && !(*noise.slip_left > 0)) || (noise.slip_right && !(*noise.slip_right > 0))) {
    throw ScenarioError("slip factors must be positive");
  }
  controller.validate();
  drive.validate();
  costmap.validate();
  aerial.validate();
}

ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  if (!root.IsMap()) throw ScenarioError("scenario: top level must be a mapping");
  try {
    get(root, "name", cfg.name);
    get(root, "seed", cfg.seed);
    get(root, "duration", cfg.duration);
    get(root, "arrival_tolerance", cfg.arrival_tolerance);
    get(root, "stop_on_recommendation", cfg.stop_on_recommendation);
    get(root, "map_follow_margin", cfg.map_follow_margin);
    if (root["expect"]) {
      const auto e = root["expect"].as<std::string>();
      if (e == "arrival") {
        cfg.expect = Expect::Arrival;
      } else if (e == "recommendation") {
        cfg.expect = Expect::Recommendation;
      } else {
        throw ScenarioError("scenario: expect must be 'arrival' or 'recommendation'");
      }
    }
    if (const auto w = root["world"]) {
      auto& b = cfg.terrain.bounds;
      get(w, "x_min", b.x_min);
      get(w, "y_min", b.y_min);
      get(w, "x_max", b.x_max);
      get(w, "y_max", b.y_max);
    }
    parse_terrain(root["terrain"], cfg.terrain, base_dir);
    cfg.terrain.seed = cfg.seed;
    if (const auto s = root["start"]) {
      get(s, "x", cfg.start.x);
      get(s, "y", cfg.start.y);
      get(s, "theta", cfg.start.theta);
      cfg.start.theta = normalize_angle(cfg.start.theta);
    }
    if (const auto g = root["goals"]) {
      for (const auto& p : g) cfg.goals.push_back({p[0].as<double>(), p[1].as<double>()});
    }
    if (const auto s = root["sensor"]) {
      auto& o = cfg.sensor;
      get(s, "mount_x", o.mount_x);
      get(s, "height", o.height);
      get(s, "tilt_deg", o.tilt_deg);
      get(s, "elevation_min_deg", o.elevation_min_deg);
      get(s, "elevation_max_deg", o.elevation_max_deg);
      get(s, "rays", o.rays);
      get(s, "max_range", o.max_range);
      get(s, "noise", o.noise);
      get(s, "rate", o.rate);
      get(s, "voxel", o.voxel);
    }
    if (const auto n = root["noise"]) {
      get(n, "slip_sigma", cfg.noise.slip_sigma);
      get(n, "drift_rate", cfg.noise.drift_rate);
      if (n["slip_left"]) cfg.noise.slip_left = n["slip_left"].as<double>();
      if (n["slip_right"]) cfg.noise.slip_right = n["slip_right"].as<double>();
    }
    if (const auto p = root["planner"]) {
      if (p["preset"]) {
        const auto name = p["preset"].as<std::string>();
        const auto preset = planner::preset_from_name(name);
        if (!preset) throw ScenarioError("planner: unknown preset '" + name + "'");
        cfg.preset = *preset;
        cfg.planner = planner::PlannerConfig::preset(*preset);
      }
      get(p, "w_t", cfg.planner.w_t);
      if (p["c_d"]) cfg.planner.c_d_override = p["c_d"].as<double>();
      get(p, "unknown_cost", cfg.planner.unknown_cost_value);
      get(p, "unknown_blocked", cfg.planner.unknown_blocked);
      get(p, "timeout", cfg.planner.timeout_s);
      get(p, "replan_rate", cfg.planner.replan_rate);
    }
    if (const auto c = root["controller"]) {
      auto& o = cfg.controller;
      get(c, "v_min", o.v_min);
      get(c, "v_max", o.v_max);
      get(c, "omega_max", o.omega_max);
      if (c["omega_max"]) o.omega_min = -o.omega_max;
      get(c, "a_max", o.a_max);
      get(c, "alpha_max", o.alpha_max);
      get(c, "horizon", o.horizon);
      get(c, "rollout_step", o.rollout_step);
      get(c, "samples_v", o.samples_v);
      get(c, "samples_omega", o.samples_omega);
      get(c, "w_path", o.w_path);
      get(c, "w_goal", o.w_goal);
      get(c, "w_align", o.w_align);
      get(c, "w_obs", o.w_obs);
      get(c, "min_clearance", o.min_clearance);
      get(c, "lookahead", o.lookahead);
    }
    if (const auto c = root["costmap"]) {
      auto& o = cfg.costmap;
      get(c, "size_x", o.size_x);
      get(c, "size_y", o.size_y);
      get(c, "resolution", o.resolution);
      get(c, "origin_x", o.origin_x);
      get(c, "origin_y", o.origin_y);
      get(c, "init_cost", o.init_cost);
      get(c, "warmup", o.warmup_messages);
      get(c, "rate", o.publish_rate);
    }
    if (const auto e = root["estimator"]) {
      if (e["weights"]) {
        std::filesystem::path p = e["weights"].as<std::string>();
        cfg.weights = p.is_relative() ? base_dir / p : p;
      }
      get(e, "max_slope", cfg.fallback.max_slope);
      get(e, "max_roughness", cfg.fallback.max_roughness);
      get(e, "max_step", cfg.fallback.max_step);
    }
  } catch (const YAML::Exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  cfg.controller.dt_control = 1.0 / 20.0;
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

}  // namespace terranav::sim
