#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "terranav/simworld.hpp"

using namespace terranav;
using namespace terranav::sim;

namespace {

const std::filesystem::path kScenarios = TERRANAV_SCENARIO_DIR;

TerrainSpec flat_spec() {
  TerrainSpec s;
  s.bounds = {-10, -10, 10, 10};
  return s;
}

ScenarioConfig quick_flat() {
  auto cfg = load_scenario(kScenarios / "flat.yaml");
  cfg.duration = 30.0;
  return cfg;
}

}  // namespace

TEST(Scenario, ParsesShippedFiles) {
  for (const char* name : {"flat.yaml", "cloth.yaml", "sealed.yaml"}) {
    const auto cfg = load_scenario(kScenarios / name);
    EXPECT_FALSE(cfg.goals.empty()) << name;
  }
  const auto cloth = load_scenario(kScenarios / "cloth.yaml");
  EXPECT_EQ(cloth.preset, planner::Preset::Offline);
  EXPECT_DOUBLE_EQ(cloth.planner.w_t, 8.0);
  ASSERT_EQ(cloth.terrain.cloths.size(), 1u);
  EXPECT_DOUBLE_EQ(cloth.terrain.cloths[0].traversability, 0.3);
  EXPECT_EQ(load_scenario(kScenarios / "sealed.yaml").expect, Expect::Recommendation);
}

TEST(Scenario, Errors) {
  EXPECT_THROW(parse_scenario("[1, 2"), ScenarioError);
  EXPECT_THROW(parse_scenario("- a\n- b\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("goals: []\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("goals: [[50, 0]]\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("goals: [[1, 0]]\nplanner: {preset: quick}\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("goals: [[1, 0]]\nexpect: maybe\n"), ScenarioError);
  EXPECT_THROW(load_scenario(kScenarios / "missing.yaml"), std::exception);
  EXPECT_NO_THROW(parse_scenario("goals: [[1, 0]]\n"));
}

TEST(Terrain, FlatAndBox) {
  auto spec = flat_spec();
  EXPECT_EQ(Terrain(spec).height(3.0, -2.0), 0.0);
  spec.boxes.push_back({0, 0, 1, 1, 0.3});
  const Terrain t(spec);
  EXPECT_DOUBLE_EQ(t.height(0.5, 0.5), 0.3);
  EXPECT_DOUBLE_EQ(t.height(1.5, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(t.traversability(0.5, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(t.traversability(1.5, 0.5), 1.0);
  EXPECT_GE(t.max_height(), 0.3);
}

TEST(Terrain, ClothBoundedAndSeeded) {
  auto spec = flat_spec();
  spec.cloths.push_back({-1, -1, 2, 2, 0.03, 0.3});
  spec.seed = 5;
  const Terrain a(spec), b(spec);
  double lo = 1, hi = -1;
  for (double x = -1.0; x <= 1.0; x += 0.01) {
    for (double y = -1.0; y <= 1.0; y += 0.01) {
      const double h = a.height(x, y);
      EXPECT_EQ(h, b.height(x, y));
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
  }
  EXPECT_GE(lo, -0.03);
  EXPECT_LE(hi, 0.03);
  EXPECT_GT(hi - lo, 0.01);
  EXPECT_DOUBLE_EQ(a.traversability(0.0, 0.0), 0.3);
  spec.seed = 6;
  EXPECT_NE(Terrain(spec).height(0.3, 0.2), a.height(0.3, 0.2));
}

TEST(Raycast, FlatGroundClosedForm) {
  const Terrain t(flat_spec());
  const double h = 0.45;
  for (double dep : {10.0, 25.0, 52.0, 80.0}) {
    const double a = dep * std::numbers::pi / 180.0;
    const Point3 dir{std::cos(a), 0.0, -std::sin(a)};
    const auto r = cast_ray(t, {0.0, 0.0, h}, dir, 10.0);
    ASSERT_TRUE(r) << dep;
    EXPECT_NEAR(*r, h / std::sin(a), 1e-3);
  }
  EXPECT_FALSE(cast_ray(t, {0.0, 0.0, h}, {0.0, 0.0, 1.0}, 10.0));
  EXPECT_FALSE(cast_ray(t, {0.0, 0.0, h}, {1.0, 0.0, 0.0}, 10.0));
}

TEST(Raycast, WallFaceIsVertical) {
  auto spec = flat_spec();
  spec.boxes.push_back({2.0, -2.0, 0.5, 4.0, 1.0});
  const Terrain t(spec);
  for (double el : {-0.1, -0.05, 0.0, 0.05, 0.1}) {
    const Point3 dir{std::cos(el), 0.0, std::sin(el)};
    const auto r = cast_ray(t, {0.0, 0.0, 0.45}, dir, 10.0);
    ASSERT_TRUE(r);
    EXPECT_NEAR(*r * dir.x, 2.0, 1e-3);
  }
}

TEST(Raycast, ScanHitsGroundAroundRobot) {
  const Terrain t(flat_spec());
  SensorSpec s;
  auto rng = make_stream(1, 0);
  const auto cloud = raycast_scan(t, s, {}, rng);
  ASSERT_GT(cloud.size(), 100u);
  for (const auto& p : cloud.points) EXPECT_NEAR(p.z, 0.0, 1e-3);
  std::size_t ahead = 0;
  for (const auto& p : cloud.points) ahead += p.x > 0.5;
  EXPECT_GT(ahead, cloud.size() / 4);
}

TEST(StepRobot, Consistency) {
  const drive::DriveConfig cfg;
  auto rng = make_stream(1, 2);
  RobotState s;
  const auto same = step_robot(s, {0.0, 0.0}, 0.01, {}, cfg, rng);
  EXPECT_EQ(same.truth, s.truth);
  EXPECT_EQ(same.odom, s.odom);

  for (int i = 0; i < 100; ++i) s = step_robot(s, {0.3, 0.35}, 0.01, {}, cfg, rng);
  EXPECT_EQ(s.truth, s.odom);

  MotionNoise slip;
  slip.slip_left = 0.9;
  RobotState r;
  for (int i = 0; i < 100; ++i) r = step_robot(r, {0.3, 0.3}, 0.01, slip, cfg, rng);
  EXPECT_EQ(r.odom.theta, 0.0);
  EXPECT_GT(r.truth.theta, 0.01);
  EXPECT_THROW(step_robot(r, {}, 0.0, {}, cfg, rng), std::invalid_argument);
}

TEST(RenderTruth, MatchesTerrain) {
  auto spec = flat_spec();
  spec.bounds = {-2, -2, 2, 2};
  spec.boxes.push_back({0, 0, 1, 1, 0.3});
  const auto m = render_truth(Terrain(spec), 0.1);
  EXPECT_EQ(m.rows(), 40);
  EXPECT_DOUBLE_EQ(m.at(Layer::Traversability, *m.world_to_cell(0.55, 0.55)), 0.0);
  EXPECT_DOUBLE_EQ(m.at(Layer::Elevation, *m.world_to_cell(0.55, 0.55)), 0.3);
  EXPECT_DOUBLE_EQ(m.at(Layer::Traversability, *m.world_to_cell(-1.0, -1.0)), 1.0);
}

TEST(Loop, PeriodTicks) {
  EXPECT_EQ(period_ticks(100.0), 1);
  EXPECT_EQ(period_ticks(10.0), 10);
  EXPECT_EQ(period_ticks(0.1), 1000);
  EXPECT_EQ(period_ticks(1000.0), 1);
  EXPECT_THROW(period_ticks(0.0), std::invalid_argument);
}

TEST(Loop, FlatArrivesWithoutEvents) {
  const auto cfg = quick_flat();
  const auto r = run_loop(cfg);
  EXPECT_EQ(r.outcome, Outcome::Arrived);
  EXPECT_TRUE(r.events.empty());
  EXPECT_TRUE(meets_expectation(r, cfg));
  const auto& end = r.trajectory.back().truth;
  EXPECT_LT(std::hypot(end.x - 3.0, end.y), cfg.arrival_tolerance + 0.05);
  EXPECT_TRUE(r.timings.empty());
}

TEST(Loop, SealedRecommendsAerial) {
  const auto cfg = load_scenario(kScenarios / "sealed.yaml");
  const auto r = run_loop(cfg);
  EXPECT_EQ(r.outcome, Outcome::Recommendation);
  EXPECT_EQ(r.recommendation_cause, decision::Cause::NoPath);
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].after, decision::Mode::Aerial);
  EXPECT_TRUE(meets_expectation(r, cfg));
}

TEST(Loop, DeterministicReports) {
  const auto cfg = quick_flat();
  const auto a = oracle::scratch_dir("loop_a"), b = oracle::scratch_dir("loop_b");
  write_report(run_loop(cfg), a);
  write_report(run_loop(cfg), b);
  for (const auto& e : std::filesystem::directory_iterator(a)) {
    EXPECT_TRUE(oracle::same_bytes(e.path(), b / e.path().filename())) << e.path().filename();
  }
  EXPECT_FALSE(std::filesystem::exists(a / "timing.csv"));
}

TEST(Loop, ProfilingAddsTimings) {
  auto cfg = quick_flat();
  cfg.duration = 3.0;
  const auto r = run_loop(cfg, {true});
  EXPECT_FALSE(r.timings.empty());
  const auto dir = oracle::scratch_dir("loop_profile");
  write_report(r, dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "timing.csv"));
}
