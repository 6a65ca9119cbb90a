// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "terranav/controller.hpp"
#include "terranav/costmap.hpp"
#include "terranav/decision.hpp"
#include "terranav/drive.hpp"
#include "terranav/elevation.hpp"
#include "terranav/geobench.hpp"
#include "terranav/planner.hpp"
#include "terranav/scenario.hpp"
#include "terranav/simworld.hpp"

using namespace terranav;
using Clock = std::chrono::steady_clock;

namespace {

const std::filesystem::path kScenarios = TERRANAV_SCENARIO_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict offline_planning() {
  const auto t0 = Clock::now();
  const auto cfg = sim::load_scenario(kScenarios / "cloth.yaml");
  const sim::Terrain terrain(cfg.terrain);
  const auto world = costmap::convert_layer(sim::render_truth(terrain, 0.1));
  const auto pc = planner::PlannerConfig::preset(planner::Preset::Offline);
  const auto out = planner::compare(world, {-4.0, 0.0}, {4.0, 0.0}, pc);
  const double elapsed = seconds_since(t0);
  if (!out.comparison) return {false, "planning failed"};
  const auto& c = *out.comparison;
  const bool ok = c.distance_increase_pct >= 5.0 && c.distance_increase_pct <= 15.0 &&
                  c.terrain_reduction_pct >= 90.0 && elapsed < 10.0;
  return {ok, fmt("distance %+.1f%%, terrain -%.1f%%, %.2f s", c.distance_increase_pct, c.terrain_reduction_pct,
                  elapsed)};
}

Verdict astar_optimality() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> cell(0, 19);
  std::uniform_real_distribution<double> wt(0.0, 40.0);
  int mismatches = 0, solved = 0;
  for (int i = 0; i < 200; ++i) {
    auto world = oracle::random_costmap(rng, 20, 0.1, 0.35, 0.05);
    planner::PlannerConfig pc;
    pc.w_t = wt(rng);
    const planner::EnergyModel energy;
    const CellIndex s{cell(rng), cell(rng)}, g{cell(rng), cell(rng)};
    world.set(s, 0);
    world.set(g, 0);
    const auto a = planner::plan(world, world.cell_center(s), world.cell_center(g), pc, energy);
    const auto d = oracle::dijkstra(world, s, g, pc, energy.c_d());
    if (a.ok() != d.has_value() || (d && a.result->g_total != *d)) ++mismatches;
    if (d) ++solved;
  }
  const double elapsed = seconds_since(t0);
  return {mismatches == 0 && elapsed < 30.0,
          fmt("%d mismatches over 200 maps (%d reachable), %.2f s", mismatches, solved, elapsed)};
}

Verdict cost_sweep() {
  const costmap::CostmapConfig cfg;
  int violations = 0, prev = 101;
  for (int k = 0; k <= 1000; ++k) {
    const int c = costmap::traversability_to_cost(k / 1000.0, cfg);
    if (c < 0 || c > 100 || c > prev) ++violations;
    prev = c;
  }
  if (costmap::traversability_to_cost(0.85, cfg) != 0) ++violations;
  if (costmap::traversability_to_cost(0.6, cfg) != 20) ++violations;
  if (costmap::traversability_to_cost(0.0, cfg) != 100) ++violations;
  return {violations == 0, fmt("%d violations over 1001 samples", violations)};
}

Verdict kalman_closed_form() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> len(2, 60);
  std::uniform_real_distribution<double> h(-2.0, 2.0), lv(-4.0, 0.0);
  double worst = 0.0;
  int shrink_failures = 0;
  for (int s = 0; s < 1000; ++s) {
    const int n = len(rng);
    std::vector<double> z(n), var(n);
    for (int i = 0; i < n; ++i) {
      z[i] = h(rng);
      var[i] = std::pow(10.0, lv(rng));
    }
    double mean = z[0], v = var[0];
    for (int i = 1; i < n; ++i) {
      const auto f = elevation::kalman_fuse_cell(mean, v, z[i], var[i]);
      if (!(f.variance < v && f.variance < var[i])) ++shrink_failures;
      mean = f.height;
      v = f.variance;
    }
    const auto b = oracle::batch_fuse(z, var);
    worst = std::max({worst, std::abs(mean - b.mean), std::abs(v - b.variance)});
  }
  return {worst <= 1e-9 && shrink_failures == 0,
          fmt("max deviation %.3g, %d non-shrinking steps", worst, shrink_failures)};
}

Verdict cnn_forward() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> amp(0.02, 0.5);
  std::uniform_real_distribution<float> scale(0.3f, 1.5f);
  double worst = 0.0;
  int range_failures = 0, repeat_failures = 0;
  for (int i = 0; i < 100; ++i) {
    const auto model = traversability::CnnModel::random(1000 + i, scale(rng));
    const auto patch = oracle::random_patch(rng, amp(rng));
    const double y = model.forward(patch);
    const double y2 = model.forward(patch);
    if (!(y > 0.0 && y < 1.0)) ++range_failures;
    if (std::memcmp(&y, &y2, sizeof y) != 0) ++repeat_failures;
    worst = std::max(worst, std::abs(y - oracle::naive_cnn(model, patch)));
  }
  return {worst <= 1e-5 && range_failures == 0 && repeat_failures == 0,
          fmt("max |diff| %.3g, %d out of range, %d non-repeatable", worst, range_failures, repeat_failures)};
}

Verdict odometry() {
  const drive::DriveConfig cfg;
  Pose2D p;
  const double turn = 0.5 * cfg.track * std::numbers::pi / 2.0;
  for (int side = 0; side < 4; ++side) {
    for (int k = 0; k < 100; ++k) p = drive::integrate_odometry(p, 0.01, 0.01, cfg);
    for (int k = 0; k < 50; ++k) p = drive::integrate_odometry(p, -turn / 50.0, turn / 50.0, cfg);
  }
  const double err = std::max({std::abs(p.x), std::abs(p.y), std::abs(normalize_angle(p.theta))});

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> v(-cfg.v_limit, cfg.v_limit), w(-cfg.omega_limit, cfg.omega_limit);
  int round_trip_failures = 0;
  double worst_abs = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Twist t{v(rng), w(rng)};
    const Twist back = drive::forward_kinematics(drive::inverse_kinematics(t, cfg), cfg);
    if (back.v != t.v || back.omega != t.omega) ++round_trip_failures;
    worst_abs = std::max({worst_abs, std::abs(back.v - t.v), std::abs(back.omega - t.omega)});
  }
  return {err <= 1e-9 && round_trip_failures == 0,
          fmt("square closure error %.3g, %d inexact round trips in 1e5 (worst abs error %.2g)", err,
              round_trip_failures, worst_abs)};
}

Verdict controller_contract() {
  control::ControllerConfig cfg;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int window_violations = 0, selected = 0, veto_misses = 0, lethal_trajs = 0;
  for (int i = 0; i < 10000; ++i) {
    costmap::WorldCostmap local(60, 60, 0.1, -3.0, -3.0, 0);
    const int blobs = static_cast<int>(u(rng) * 6);
    for (int b = 0; b < blobs; ++b) {
      const int r0 = static_cast<int>(u(rng) * 56), c0 = static_cast<int>(u(rng) * 56);
      for (int r = r0; r < r0 + 4; ++r)
        for (int c = c0; c < c0 + 4; ++c) local.set({r, c}, 100);
    }
    const Pose2D pose{u(rng) - 0.5, u(rng) - 0.5, (2.0 * u(rng) - 1.0) * std::numbers::pi};
    const Twist current{-0.5 + 1.2 * u(rng), -1.3 + 2.6 * u(rng)};
    const planner::Waypoint goal{-2.5 + 5.0 * u(rng), -2.5 + 5.0 * u(rng)};
    const std::vector<planner::Waypoint> path{{pose.x, pose.y}, goal};

    const auto sel = control::select_command(current, pose, path, goal, local, cfg);
    if (sel) {
      ++selected;
      const double lo_v = std::max(cfg.v_min, current.v - cfg.a_max * cfg.dt_control);
      const double hi_v = std::min(cfg.v_max, current.v + cfg.a_max * cfg.dt_control);
      const double lo_w = std::max(cfg.omega_min, current.omega - cfg.alpha_max * cfg.dt_control);
      const double hi_w = std::min(cfg.omega_max, current.omega + cfg.alpha_max * cfg.dt_control);
      // An infeasible window collapses onto the nearest limit.
      const auto in = [](double x, double lo, double hi, double cur, double lim_lo, double lim_hi) {
        if (lo > hi) return x == (cur > lim_hi ? lim_hi : lim_lo);
        return x >= lo - 1e-12 && x <= hi + 1e-12;
      };
      if (!in(sel->command.v, lo_v, hi_v, current.v, cfg.v_min, cfg.v_max) ||
          !in(sel->command.omega, lo_w, hi_w, current.omega, cfg.omega_min, cfg.omega_max)) {
        ++window_violations;
      }
    }

    // Dense veto check on one random trajectory.
    const Twist cmd{cfg.v_min + (cfg.v_max - cfg.v_min) * u(rng), -1.0 + 2.0 * u(rng)};
    const auto traj = control::rollout(cmd, pose, cfg);
    bool hits = false;
    for (std::size_t k = 0; k + 1 < traj.states.size() && !hits; ++k) {
      const auto& a = traj.states[k];
      const auto& b = traj.states[k + 1];
      for (int j = 0; j <= 20 && !hits; ++j) {
        const double s = j / 20.0;
        const auto c = local.cost_at(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y));
        hits = c && *c >= 100;
      }
    }
    if (hits) {
      ++lethal_trajs;
      if (control::score(traj, path, goal, local, cfg)) ++veto_misses;
    }
  }
  return {window_violations == 0 && veto_misses == 0 && lethal_trajs > 0,
          fmt("%d/%d selections outside window, %d/%d lethal trajectories accepted", window_violations, selected,
              veto_misses, lethal_trajs)};
}

Verdict mode_decision() {
  auto cfg = sim::load_scenario(kScenarios / "sealed.yaml");
  const auto report = sim::run_loop(cfg);
  std::vector<double> no_path;
  for (const auto& p : report.plans) {
    if (p.cause == planner::Failure::None) {
      no_path.clear();
    } else {
      no_path.push_back(p.t);
    }
  }
  bool sequence_ok = false;
  double gap = -1.0;
  if (!report.events.empty()) {
    const auto& e = report.events.front();
    std::size_t failures_before = 0;
    double second = -1.0;
    for (const auto& p : report.plans) {
      if (p.t > e.t) break;
      if (p.cause != planner::Failure::None) {
        if (++failures_before == 2) second = p.t;
      }
    }
    gap = e.t - second;
    sequence_ok = failures_before == 2 && second >= 0.0 && gap >= 0.0 && gap <= 0.5 &&
                  e.after == decision::Mode::Aerial && e.cause == decision::Cause::NoPath;
  }

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> lc(0.0, 5.0);
  int oscillations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double cg = std::pow(10.0, lc(rng)), ca = std::pow(10.0, lc(rng));
    for (auto m : {decision::Mode::Ground, decision::Mode::Aerial}) {
      const decision::ModeState s0{m, 0.0, decision::Cause::None};
      const auto s1 = decision::select_mode(s0, cg, ca, decision::Cause::None, 1.0);
      const auto s2 = decision::select_mode(s1, cg, ca, decision::Cause::None, 2.0);
      if (s2.mode != s1.mode) ++oscillations;
    }
  }
  return {sequence_ok && oscillations == 0,
          fmt("%zu plans, %zu events, aerial %.2f s after second no-path, %d oscillations", report.plans.size(),
              report.events.size(), gap, oscillations)};
}

Verdict geobench_stats() {
  std::mt19937_64 rng(31);
  PointCloud grid;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) grid.points.push_back({i * 0.5, j * 0.5, 0.0});
  const auto mesh = geobench::delaunay_2_5d(grid);
  std::uniform_real_distribution<double> xy(0.0, 10.0);
  std::normal_distribution<double> noise(0.0, 0.02);
  PointCloud cloud;
  for (int i = 0; i < 10000; ++i) cloud.points.push_back({xy(rng), xy(rng), noise(rng)});
  const auto stats = geobench::cloud_to_mesh_stats(cloud, mesh);
  const double expected = 2.0 * std::sqrt(2.0 / std::numbers::pi);
  const double rel = std::abs(stats.mean - expected) / expected;

  std::normal_distribution<double> white(0.0, 1.0);
  std::vector<double> series(1000000);
  for (auto& x : series) x = white(rng);
  const double rate = 100.0;
  const auto curve = geobench::allan_deviation(series, rate, geobench::log_spaced_taus(series.size(), rate));
  const double slope = geobench::loglog_slope(curve.curve, 0.1, 100.0);
  return {rel <= 0.10 && std::abs(slope + 0.5) <= 0.05,
          fmt("mean %.3f cm (expected %.3f), Allan slope %.3f", stats.mean, expected, slope)};
}

Verdict performance() {
  GridGeometry geo;
  geo.origin_x = -2.5;
  geo.origin_y = -2.5;
  GridMap map(geo);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> xy(-2.5, 2.5), z(-0.05, 0.05);
  PointCloud cloud;
  cloud.frame = Frame::Map;
  for (int i = 0; i < 10000; ++i) cloud.points.push_back({xy(rng), xy(rng), z(rng)});
  // Warm a first pass so the timed call fuses into populated cells.
  elevation::integrate_cloud(map, cloud, {0.0, 0.0, 0.5}, {});
  const auto t0 = Clock::now();
  const auto stats = elevation::integrate_cloud(map, cloud, {0.0, 0.0, 0.5}, {});
  const double integrate_ms = seconds_since(t0) * 1e3;

  const auto cfg = sim::load_scenario(kScenarios / "flat.yaml");
  const auto report = sim::run_loop(cfg);
  const double speedup = report.sim_time / report.wall_time_s;
  return {integrate_ms < 50.0 && speedup >= 5.0 && stats.points_accepted > 0,
          fmt("integrate 1e4 points %.2f ms, simulate %.1fx real time", integrate_ms, speedup)};
}

Verdict determinism() {
  const auto cfg = sim::load_scenario(kScenarios / "cloth.yaml");
  const auto a = oracle::scratch_dir("det_a"), b = oracle::scratch_dir("det_b");
  sim::write_report(sim::run_loop(cfg), a);
  sim::write_report(sim::run_loop(cfg), b);
  int files = 0, differing = 0;
  for (const auto& entry : std::filesystem::directory_iterator(a)) {
    ++files;
    if (!oracle::same_bytes(entry.path(), b / entry.path().filename())) ++differing;
  }
  std::size_t files_b = 0;
  for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(b)) ++files_b;
  return {files > 0 && differing == 0 && files_b == static_cast<std::size_t>(files),
          fmt("%d report files, %d differ", files, differing)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"offline planning comparison", offline_planning},
      {"A* matches Dijkstra", astar_optimality},
      {"piecewise cost sweep", cost_sweep},
      {"sequential vs batch fusion", kalman_closed_form},
      {"CNN vs direct convolution", cnn_forward},
      {"odometry and kinematics", odometry},
      {"controller window and veto", controller_contract},
      {"mode decision", mode_decision},
      {"geobench statistics", geobench_stats},
      {"performance", performance},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
