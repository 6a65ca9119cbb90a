#include "terranav/simworld.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>

#include <nlohmann/json.hpp>

#include "terranav/ascii_grid.hpp"
#include "terranav/cnn.hpp"
#include "terranav/controller.hpp"
#include "terranav/elevation.hpp"
#include "terranav/traversability.hpp"

namespace terranav::sim {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

namespace {

enum Stream : std::uint64_t { kCloth = 1, kScan = 2, kMotion = 3 };

bool in_box(const BoxFeature& b, double x, double y) {
  return x >= b.x && x < b.x + b.w && y >= b.y && y < b.y + b.h;
}

bool in_cloth(const ClothFeature& c, double x, double y) {
  return x >= c.x && x < c.x + c.w && y >= c.y && y < c.y + c.h;
}

bool in_wall(const WallFeature& w, double x, double y) {
  const double dx = w.x1 - w.x0, dy = w.y1 - w.y0;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((x - w.x0) * dx + (y - w.y0) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  const double px = w.x0 + s * dx - x, py = w.y0 + s * dy - y;
  return px * px + py * py <= 0.25 * w.thickness * w.thickness;
}

}  // namespace

Terrain::Terrain(TerrainSpec spec) : spec_(std::move(spec)) {
  for (std::size_t i = 0; i < spec_.cloths.size(); ++i) {
    auto rng = make_stream(spec_.seed, kCloth * 1000 + i);
    std::uniform_real_distribution<double> wavelength(0.25, 0.8), angle(0.0, 2.0 * std::numbers::pi),
        weight(0.5, 1.0);
    std::vector<Wave> waves(4);
    double sum = 0.0;
    for (auto& w : waves) {
      const double k = 2.0 * std::numbers::pi / wavelength(rng);
      const double dir = angle(rng);
      w = {k * std::cos(dir), k * std::sin(dir), angle(rng), weight(rng)};
      sum += w.weight;
    }
    for (auto& w : waves) w.weight /= sum;
    cloth_waves_.push_back(std::move(waves));
  }

  const auto& b = spec_.bounds;
  double base_max = 0.0;
  switch (spec_.base) {
    case BaseKind::Flat:
      break;
    case BaseKind::Ramp:
      base_max = std::max(spec_.ramp_slope * b.x_min, spec_.ramp_slope * b.x_max);
      break;
    case BaseKind::File:
      base_max = -std::numeric_limits<double>::infinity();
      for (double v : spec_.base_grid->values) {
        if (std::isfinite(v)) base_max = std::max(base_max, v);
      }
      base_max = std::max(base_max, 0.0);
      break;
  }
  max_height_ = base_max;
  for (const auto& box : spec_.boxes) max_height_ += std::max(0.0, box.height);
  for (const auto& w : spec_.walls) max_height_ += std::max(0.0, w.height);
  for (const auto& c : spec_.cloths) max_height_ += c.amplitude;
}

double Terrain::base(double x, double y) const {
  switch (spec_.base) {
    case BaseKind::Flat:
      return 0.0;
    case BaseKind::Ramp:
      return spec_.ramp_slope * x;
    case BaseKind::File: {
      const auto& g = *spec_.base_grid;
      const double u = std::floor((x - g.xllcorner) / g.cellsize);
      const double v = std::floor((y - g.yllcorner) / g.cellsize);
      if (u < 0 || v < 0 || u >= g.ncols || v >= g.nrows) return 0.0;
      const double h = g.values[static_cast<std::size_t>(v) * g.ncols + static_cast<std::size_t>(u)];
      return std::isfinite(h) ? h : 0.0;
    }
  }
  return 0.0;
}

double Terrain::height(double x, double y) const {
  double h = base(x, y);
  for (const auto& box : spec_.boxes) {
    if (in_box(box, x, y)) h += box.height;
  }
  for (const auto& w : spec_.walls) {
    if (in_wall(w, x, y)) h += w.height;
  }
  for (std::size_t i = 0; i < spec_.cloths.size(); ++i) {
    const auto& c = spec_.cloths[i];
    if (!in_cloth(c, x, y)) continue;
    double s = 0.0;
    for (const auto& w : cloth_waves_[i]) s += w.weight * std::sin(w.kx * x + w.ky * y + w.phase);
    h += c.amplitude * s;
  }
  return h;
}

double Terrain::traversability(double x, double y) const {
  double t = 1.0;
  for (const auto& box : spec_.boxes) {
    if (in_box(box, x, y)) t = 0.0;
  }
  for (const auto& w : spec_.walls) {
    if (in_wall(w, x, y)) t = 0.0;
  }
  for (const auto& c : spec_.cloths) {
    if (in_cloth(c, x, y)) t = std::min(t, c.traversability);
  }
  return t;
}

double sample_height(const Terrain& terrain, double x, double y) { return terrain.height(x, y); }

GridMap render_truth(const Terrain& terrain, double resolution) {
  const auto& b = terrain.spec().bounds;
  GridMap map(GridGeometry{b.x_max - b.x_min, b.y_max - b.y_min, resolution, b.x_min, b.y_min});
  for (int r = 0; r < map.rows(); ++r) {
    for (int c = 0; c < map.cols(); ++c) {
      const auto [x, y] = map.cell_center({r, c});
      map.at(Layer::Elevation, {r, c}) = terrain.height(x, y);
      map.at(Layer::Traversability, {r, c}) = terrain.traversability(x, y);
    }
  }
  return map;
}

Point3 sensor_origin(const Terrain& terrain, const SensorSpec& sensor, const Pose2D& pose) {
  const double c = std::cos(pose.theta), s = std::sin(pose.theta);
  return {pose.x + c * sensor.mount_x, pose.y + s * sensor.mount_x, terrain.height(pose.x, pose.y) + sensor.height};
}

Point3 ray_direction(const SensorSpec& sensor, const Pose2D& pose, double azimuth, double elevation) {
  const double ce = std::cos(elevation);
  const double x = ce * std::cos(azimuth), y = ce * std::sin(azimuth), z = std::sin(elevation);
  // The downward axis of the inverted sensor leans forward by the tilt, so the
  // forward edge of the band rises.
  const double t = sensor.tilt_deg * std::numbers::pi / 180.0;
  const double xp = x * std::cos(t) - z * std::sin(t);
  const double zp = x * std::sin(t) + z * std::cos(t);
  const double c = std::cos(pose.theta), s = std::sin(pose.theta);
  return {c * xp - s * y, s * xp + c * y, zp};
}

std::optional<double> cast_ray(const Terrain& terrain, const Point3& o, const Point3& d, double max_range,
                               double march_step) {
  const auto& b = terrain.spec().bounds;
  const auto gap = [&](double t) { return o.z + t * d.z - terrain.height(o.x + t * d.x, o.y + t * d.y); };
  const auto inside = [&](double t) { return b.contains(o.x + t * d.x, o.y + t * d.y); };
  if (!inside(0.0)) return std::nullopt;

  double t = 0.0;
  const double top = terrain.max_height();
  if (o.z > top) {
    if (d.z >= 0.0) return std::nullopt;
    t = (o.z - top) / -d.z;
    if (t >= max_range) return std::nullopt;
  }
  if (!inside(t)) return std::nullopt;
  if (gap(t) < 0.0) {
    if (t == 0.0) return std::nullopt;  // origin below the surface
    return t;                           // landed on the top plane itself
  }
  while (t < max_range) {
    const double next = std::min(t + march_step, max_range);
    if (!inside(next)) return std::nullopt;
    if (gap(next) < 0.0) {
      double lo = t, hi = next;
      while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    t = next;
  }
  return std::nullopt;
}

PointCloud raycast_scan(const Terrain& terrain, const SensorSpec& sensor, const Pose2D& pose, std::mt19937_64& rng) {
  PointCloud cloud;
  cloud.frame = Frame::Map;
  cloud.points.reserve(sensor.rays);
  const Point3 o = sensor_origin(terrain, sensor, pose);
  const double deg = std::numbers::pi / 180.0;
  std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> band(std::sin(sensor.elevation_min_deg * deg),
                                              std::sin(sensor.elevation_max_deg * deg));
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int i = 0; i < sensor.rays; ++i) {
    const double a = azimuth(rng);
    const double e = std::asin(band(rng));
    const double n = noise(rng);
    const Point3 d = ray_direction(sensor, pose, a, e);
    const auto hit = cast_ray(terrain, o, d, sensor.max_range);
    if (!hit) continue;
    const double r = *hit + sensor.noise * n;
    cloud.points.push_back({o.x + r * d.x, o.y + r * d.y, o.z + r * d.z});
  }
  return cloud;
}

RobotState step_robot(const RobotState& state, const drive::WheelSpeeds& wheels, double dt,
                      const MotionNoise& noise, const drive::DriveConfig& cfg, std::mt19937_64& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_robot: dt must be positive");
  RobotState next = state;
  const double sl = wheels.left * dt, sr = wheels.right * dt;
  double kl = 1.0, kr = 1.0;
  if (noise.slip_sigma > 0.0) {
    std::normal_distribution<double> slip(1.0, noise.slip_sigma);
    kl = std::max(0.05, slip(rng));
    kr = std::max(0.05, slip(rng));
  }
  if (noise.slip_left) kl = *noise.slip_left;
  if (noise.slip_right) kr = *noise.slip_right;

  next.truth = drive::integrate_odometry(state.truth, kl * sl, kr * sr, cfg);
  next.odom = drive::integrate_odometry(state.odom, sl, sr, cfg);
  next.wheels.arc_left += sl;
  next.wheels.arc_right += sr;
  next.measured = {0.5 * (kl * sl + kr * sr) / dt, (kr * sr - kl * sl) / cfg.track / dt};
  if (noise.drift_rate > 0.0) {
    std::normal_distribution<double> walk(0.0, noise.drift_rate * std::sqrt(dt));
    next.drift[0] += walk(rng);
    next.drift[1] += walk(rng);
  }
  next.loc = {next.truth.x + next.drift[0], next.truth.y + next.drift[1],
              normalize_angle(next.truth.theta + next.drift[2])};
  return next;
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Arrived: return "arrived";
    case Outcome::Recommendation: return "recommendation";
    case Outcome::Timeout: return "timeout";
  }
  return "unknown";
}

int period_ticks(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("stage rate must be positive");
  return std::max(1, static_cast<int>(std::lround(kBaseRate / rate)));
}

namespace {

enum StageId { kSense, kElevation, kTraversability, kCostmap, kPlanner, kController, kDrive, kWorld, kDecision, kStages };
constexpr const char* kStageNames[kStages] = {"sense",   "elevation",  "traversability", "costmap", "planner",
                                              "controller", "drive", "world", "decision"};

class Profiler {
 public:
  explicit Profiler(bool on) : on_(on) {
    for (int i = 0; i < kStages; ++i) timings_[i].stage = kStageNames[i];
  }

  template <class F>
  void run(StageId id, F&& f) {
    if (!on_) {
      f();
      return;
    }
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto& t = timings_[id];
    ++t.calls;
    t.total_s += s;
    t.max_s = std::max(t.max_s, s);
  }

  std::vector<StageTiming> result() const {
    if (!on_) return {};
    return {timings_, timings_ + kStages};
  }

 private:
  bool on_;
  StageTiming timings_[kStages];
};

// Moves a world-frame point from the true pose into the localization frame.
Point3 to_map(const Point3& p, const Pose2D& truth, const Pose2D& loc) {
  const Pose2D rel = compose(inverse(truth), Pose2D{p.x, p.y, 0.0});
  const Pose2D m = compose(loc, rel);
  return {m.x, m.y, p.z};
}

struct LocalPath {
  std::vector<planner::Waypoint> points;
  planner::Waypoint carrot{};
};

LocalPath local_segment(const std::vector<planner::Waypoint>& path, const Pose2D& pose,
                        const planner::Waypoint& goal, double lookahead) {
  LocalPath out;
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double d = std::hypot(path[i][0] - pose.x, path[i][1] - pose.y);
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  double acc = 0.0;
  out.points.push_back(path[nearest]);
  for (std::size_t i = nearest + 1; i < path.size(); ++i) {
    acc += std::hypot(path[i][0] - path[i - 1][0], path[i][1] - path[i - 1][1]);
    if (acc > lookahead) break;
    out.points.push_back(path[i]);
  }
  out.carrot = out.points.back();
  if (out.carrot == path.back()) out.carrot = goal;
  return out;
}

}  // namespace

RunReport run_loop(const ScenarioConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto wall0 = std::chrono::steady_clock::now();
  const Terrain terrain(cfg.terrain);
  Profiler prof(opts.profile);

  RunReport rep;
  rep.scenario = cfg.name;
  rep.seed = cfg.seed;
  rep.costmap = costmap::WorldCostmap(cfg.costmap);

  std::unique_ptr<traversability::Estimator> estimator;
  if (cfg.weights.empty()) {
    estimator = std::make_unique<traversability::GeometricEstimator>(cfg.fallback);
  } else {
    estimator = std::make_unique<traversability::CnnEstimator>(traversability::CnnModel::load(cfg.weights));
  }

  GridGeometry geom;
  geom.origin_x = cfg.start.x - 0.5 * geom.size_x;
  geom.origin_y = cfg.start.y - 0.5 * geom.size_y;
  GridMap local(geom);
  CellSet dirty(local.rows(), local.cols());

  auto scan_rng = make_stream(cfg.seed, kScan);
  auto slip_rng = make_stream(cfg.seed, kMotion);

  RobotState state;
  state.truth = state.odom = state.loc = cfg.start;

  drive::DriveUnit drive_unit(cfg.drive);
  drive::WheelSpeeds wheels;
  Twist command;
  decision::FailureMonitor monitor(cfg.failure);
  decision::ModeState mode;

  std::size_t goal_index = 0;
  std::optional<planner::PlanResult> path;
  std::optional<double> last_ground_cost;
  bool have_plan_outcome = false;

  const int p_sense = period_ticks(cfg.sensor.rate);
  const int p_costmap = period_ticks(cfg.costmap.publish_rate);
  const int p_plan = period_ticks(cfg.planner.replan_rate);
  const int p_control = period_ticks(1.0 / cfg.controller.dt_control);
  const int p_drive = period_ticks(cfg.drive.loop_rate);
  const int p_decision = period_ticks(cfg.decision_rate);
  const int p_inflate = period_ticks(cfg.inflation.apply_rate);
  const double dt = 1.0 / kBaseRate;
  const long total_ticks = std::lround(cfg.duration * kBaseRate);
  double last_inflation = 0.0;
  bool done = false;

  for (long tick = 0; tick <= total_ticks && !done; ++tick) {
    const double t = tick * dt;
    const bool nav = rep.costmap.update_count() > static_cast<std::uint64_t>(cfg.costmap.warmup_messages) &&
                     goal_index < cfg.goals.size() && mode.mode == decision::Mode::Ground;
    const planner::Waypoint goal = goal_index < cfg.goals.size() ? cfg.goals[goal_index] : planner::Waypoint{};

    if (tick % p_sense == 0) {
      PointCloud cloud;
      prof.run(kSense, [&] {
        cloud = raycast_scan(terrain, cfg.sensor, state.truth, scan_rng);
        for (auto& p : cloud.points) p = to_map(p, state.truth, state.loc);
        if (cfg.sensor.voxel > 0.0) cloud = voxel_downsample(cloud, cfg.sensor.voxel);
      });
      prof.run(kElevation, [&] {
        const auto c = local.center();
        if (std::abs(state.loc.x - c[0]) > cfg.map_follow_margin ||
            std::abs(state.loc.y - c[1]) > cfg.map_follow_margin) {
          const auto shift = local.recenter(state.loc.x, state.loc.y);
          dirty.shift(shift[0], shift[1]);
        }
        const Point3 origin = to_map(sensor_origin(terrain, cfg.sensor, state.truth), state.truth, state.loc);
        const auto stats = elevation::integrate_cloud(local, cloud, origin, cfg.elevation, t, &dirty);
        rep.points_integrated += stats.points_accepted;
        ++rep.scans;
      });
    }
    if (tick > 0 && tick % p_inflate == 0) {
      prof.run(kElevation, [&] {
        elevation::inflate_variance(local, t - last_inflation, cfg.inflation);
        last_inflation = t;
      });
    }
    if (tick % p_costmap == 0) {
      prof.run(kTraversability, [&] {
        rep.trav_evaluations += traversability::fill_traversability_layer(local, *estimator, dirty.members());
        dirty.clear();
      });
      prof.run(kCostmap, [&] { costmap::apply_update(rep.costmap, local, state.loc, cfg.costmap); });
    }

    if (nav && tick % p_plan == 0) {
      prof.run(kPlanner, [&] {
        const auto out = planner::plan(rep.costmap, {state.loc.x, state.loc.y}, goal, cfg.planner, cfg.energy);
        PlanRecord rec;
        rec.t = t;
        rec.cause = out.cause;
        rec.expansions = out.expansions;
        rec.start = state.loc;
        if (out.ok()) {
          const auto& r = *out.result;
          const auto m = planner::path_metrics(r.waypoints, rep.costmap, cfg.planner, cfg.energy);
          rec.g_total = r.g_total;
          rec.distance = r.distance_total;
          rec.terrain_cost = r.terrain_cost_total;
          rec.waypoints = r.waypoints.size();
          rec.max_cost = m.max_cell_cost;
          rec.ground_cost = decision::ground_cost(r.waypoints, rep.costmap, cfg.planner, cfg.energy);
          path = r;
        } else {
          path.reset();
        }
        last_ground_cost = rec.ground_cost;
        have_plan_outcome = true;
        monitor.record_plan(!out.ok(), rec.max_cost);
        rep.plans.push_back(rec);
      });
    }

    if (tick % p_control == 0) {
      prof.run(kController, [&] {
        if (!nav || !path) {
          command = {};
          return;
        }
        const auto seg = local_segment(path->waypoints, state.loc, goal, cfg.controller.lookahead);
        const auto sel = control::select_command(command, state.loc, seg.points, seg.carrot, rep.costmap,
                                                 cfg.controller);
        if (sel) {
          command = sel->command;
        } else {
          command = {};
          ++rep.aborts;
          monitor.record_abort(t);
        }
      });
      drive_unit.command(command, t);
    }

    if (tick % p_drive == 0) {
      prof.run(kDrive, [&] {
        drive::TickRecord rec;
        wheels = drive_unit.tick(t, &rec);
        rep.drive_log.push_back(rec);
      });
    }

    prof.run(kWorld, [&] {
      const Pose2D before = state.truth;
      state = step_robot(state, wheels, dt, cfg.noise, cfg.drive, slip_rng);
      rep.distance_travelled += std::hypot(state.truth.x - before.x, state.truth.y - before.y);
    });

    if (tick % 10 == 0) rep.trajectory.push_back({t, state.truth, state.odom, state.loc, command, state.measured});

    if (goal_index < cfg.goals.size() &&
        std::hypot(goal[0] - state.loc.x, goal[1] - state.loc.y) < cfg.arrival_tolerance) {
      ++goal_index;
      ++rep.goals_reached;
      monitor.reset();
      path.reset();
      have_plan_outcome = false;
      command = {};
      drive_unit.command(command, t);
      if (goal_index == cfg.goals.size()) {
        rep.outcome = Outcome::Arrived;
        rep.sim_time = t;
        done = true;
        continue;
      }
    }

    if (nav && have_plan_outcome && tick % p_decision == 0) {
      prof.run(kDecision, [&] {
        const decision::Telemetry tel{state.measured.omega, state.measured.v,
                                      std::hypot(goal[0] - state.loc.x, goal[1] - state.loc.y)};
        const auto cause = monitor.update(tel, t);
        // A failed cycle alone is left to the monitor's no-path count.
        if (!last_ground_cost && cause == decision::Cause::None) return;
        const double c_aerial = decision::aerial_cost(tel.distance_to_goal, cfg.aerial);
        const auto next = decision::select_mode(mode, last_ground_cost, c_aerial, cause, t, cfg.aerial);
        if (next.mode != mode.mode || cause != decision::Cause::None) {
          rep.events.push_back({t, next.last_cause, last_ground_cost, c_aerial, mode.mode, next.mode});
        }
        if (next.mode != mode.mode) monitor.reset();
        mode = next;
        if (mode.mode == decision::Mode::Aerial) {
          rep.recommendation_cause = mode.last_cause;
          path.reset();
          command = {};
          drive_unit.command(command, t);
          if (cfg.stop_on_recommendation) {
            rep.outcome = Outcome::Recommendation;
            rep.sim_time = t;
            done = true;
          }
        }
      });
    }
    if (!done) rep.sim_time = t;
  }
  if (rep.outcome == Outcome::Timeout && mode.mode == decision::Mode::Aerial) rep.outcome = Outcome::Recommendation;

  rep.local_map = local;
  rep.timings = prof.result();
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return rep;
}

bool meets_expectation(const RunReport& report, const ScenarioConfig& cfg) {
  return cfg.expect == Expect::Arrival ? report.outcome == Outcome::Arrived
                                       : report.outcome == Outcome::Recommendation;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << std::setprecision(10);
  return out;
}

void pose_cols(std::ostream& out, const Pose2D& p) { out << ',' << p.x << ',' << p.y << ',' << p.theta; }

}  // namespace

void write_report(const RunReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "trajectory.csv");
    out << "t,x,y,theta,odom_x,odom_y,odom_theta,loc_x,loc_y,loc_theta,v_cmd,omega_cmd,v_meas,omega_meas\n";
    for (const auto& s : rep.trajectory) {
      out << s.t;
      pose_cols(out, s.truth);
      pose_cols(out, s.odom);
      pose_cols(out, s.loc);
      out << ',' << s.command.v << ',' << s.command.omega << ',' << s.measured.v << ',' << s.measured.omega << '\n';
    }
  }
  {
    auto out = open_out(dir / "plans.csv");
    out << "t,start_x,start_y,outcome,expansions,g_total,distance,terrain_cost,waypoints,max_cost,ground_cost\n";
    for (const auto& p : rep.plans) {
      out << p.t << ',' << p.start.x << ',' << p.start.y << ',' << planner::failure_name(p.cause) << ','
          << p.expansions << ',' << p.g_total << ',' << p.distance << ',' << p.terrain_cost << ',' << p.waypoints
          << ',' << p.max_cost << ',';
      if (p.ground_cost) out << *p.ground_cost;
      out << '\n';
    }
  }
  {
    auto out = open_out(dir / "events.csv");
    decision::write_event_header(out);
    for (const auto& e : rep.events) decision::write_event(out, e);
  }
  {
    auto out = open_out(dir / "drive.csv");
    drive::write_tick_header(out);
    for (const auto& r : rep.drive_log) drive::write_tick(out, r);
  }
  costmap::render_costmap(rep.costmap, dir / "costmap.pgm");
  write_ascii_grid(dir / "elevation.asc", export_layer(rep.local_map, Layer::Elevation));
  write_ascii_grid(dir / "traversability.asc", export_layer(rep.local_map, Layer::Traversability));

  nlohmann::ordered_json j;
  j["scenario"] = rep.scenario;
  j["seed"] = rep.seed;
  j["outcome"] = outcome_name(rep.outcome);
  j["recommendation_cause"] = decision::cause_name(rep.recommendation_cause);
  j["sim_time_s"] = rep.sim_time;
  j["distance_travelled_m"] = rep.distance_travelled;
  j["goals_reached"] = rep.goals_reached;
  j["scans"] = rep.scans;
  j["points_integrated"] = rep.points_integrated;
  j["traversability_evaluations"] = rep.trav_evaluations;
  j["plans"] = rep.plans.size();
  j["no_path_outcomes"] = std::count_if(rep.plans.begin(), rep.plans.end(),
                                        [](const PlanRecord& p) { return p.cause != planner::Failure::None; });
  j["aborts"] = rep.aborts;
  j["decision_events"] = rep.events.size();
  if (!rep.trajectory.empty()) {
    const auto& last = rep.trajectory.back().truth;
    j["final_pose"] = {last.x, last.y, last.theta};
  }
  auto out = open_out(dir / "summary.json");
  out << j.dump(2) << '\n';

  if (!rep.timings.empty()) {
    auto tout = open_out(dir / "timing.csv");
    tout << "stage,calls,total_s,mean_s,max_s\n";
    for (const auto& s : rep.timings) {
      tout << s.stage << ',' << s.calls << ',' << s.total_s << ',' << (s.calls ? s.total_s / s.calls : 0.0) << ','
           << s.max_s << '\n';
    }
    tout << "wall_total," << 1 << ',' << rep.wall_time_s << ',' << rep.wall_time_s << ',' << rep.wall_time_s << '\n';
  }
}

}  // namespace terranav::sim
