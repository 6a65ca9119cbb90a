#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "terranav/controller.hpp"

using namespace terranav;
using namespace terranav::control;
using costmap::WorldCostmap;

TEST(Window, Examples) {
  const ControllerConfig cfg;
  auto w = dynamic_window({0.0, 0.0}, cfg);
  EXPECT_NEAR(w.v.lo, -0.025, 1e-15);
  EXPECT_NEAR(w.v.hi, 0.025, 1e-15);
  w = dynamic_window({cfg.v_max, 0.0}, cfg);
  EXPECT_DOUBLE_EQ(w.v.hi, cfg.v_max);
  ControllerConfig fast = cfg;
  fast.a_max = fast.alpha_max = 1e9;
  w = dynamic_window({0.1, 0.2}, fast);
  EXPECT_DOUBLE_EQ(w.v.lo, cfg.v_min);
  EXPECT_DOUBLE_EQ(w.v.hi, cfg.v_max);
  EXPECT_DOUBLE_EQ(w.omega.lo, cfg.omega_min);
}

TEST(Window, CollapsesOntoNearestLimit) {
  const ControllerConfig cfg;
  const auto w = dynamic_window({2.0, -3.0}, cfg);
  EXPECT_DOUBLE_EQ(w.v.lo, cfg.v_max);
  EXPECT_DOUBLE_EQ(w.v.hi, cfg.v_max);
  EXPECT_DOUBLE_EQ(w.omega.lo, cfg.omega_min);
  EXPECT_DOUBLE_EQ(w.omega.hi, cfg.omega_min);
}

TEST(Rollout, StraightAndSpin) {
  ControllerConfig cfg;
  cfg.horizon = 1.0;
  auto t = rollout({1.0, 0.0}, {}, cfg);
  EXPECT_EQ(t.states.size(), 11u);
  EXPECT_NEAR(t.end().x, 1.0, 1e-9);
  EXPECT_NEAR(t.end().y, 0.0, 1e-9);
  t = rollout({0.0, std::numbers::pi}, {}, cfg);
  EXPECT_NEAR(t.end().x, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(t.end().theta), std::numbers::pi, 1e-9);
}

TEST(Rollout, ConvergesToArc) {
  ControllerConfig cfg;
  cfg.horizon = 1.57;
  double prev_err = 1.0;
  for (double step : {0.01, 0.001}) {
    cfg.rollout_step = step;
    const auto t = rollout({1.0, 1.0}, {}, cfg);
    const double T = t.states.size() - 1 == 0 ? 0.0 : (t.states.size() - 1) * step;
    const double err = std::hypot(t.end().x - std::sin(T), t.end().y - (1.0 - std::cos(T)));
    EXPECT_LT(err, step);
    EXPECT_LT(err, prev_err);
    prev_err = err;
  }
}

TEST(Score, ZeroWhenOnAlignedGoal) {
  const WorldCostmap local(40, 40, 0.1, -2.0, -2.0, 0);
  Trajectory t{{}, {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}};
  const auto s = score(t, {{1.0, 0.0}}, {1.0, 0.0}, local, {});
  ASSERT_TRUE(s);
  EXPECT_DOUBLE_EQ(s->total, 0.0);
}

TEST(Score, WeightedSumExample) {
  const WorldCostmap local(40, 40, 0.1, -2.0, -2.0, 50);
  Trajectory t{{}, {{0.0, 0.0, std::numbers::pi / 2}}};
  const auto s = score(t, {{0.0, 0.5}, {1.0, 0.0}}, {1.0, 0.0}, local, {});
  ASSERT_TRUE(s);
  EXPECT_NEAR(s->total, 0.5 + 1.0 + 0.5 * std::numbers::pi / 2 + 2.0 * 50, 1e-12);
  EXPECT_NEAR(s->total, 102.285, 1e-3);
}

TEST(Score, LethalAndClearanceVeto) {
  WorldCostmap local(40, 40, 0.1, -2.0, -2.0, 0);
  local.set(*local.world_to_cell(0.55, 0.05), 100);
  Trajectory through{{}, {{0.0, 0.05, 0.0}, {0.55, 0.05, 0.0}}};
  EXPECT_FALSE(score(through, {{1.0, 0.0}}, {1.0, 0.0}, local, {}));
  Trajectory near{{}, {{0.0, 0.05, 0.0}, {0.35, 0.05, 0.0}}};
  EXPECT_FALSE(score(near, {{1.0, 0.0}}, {1.0, 0.0}, local, {}));
  Trajectory clear{{}, {{0.0, 0.05, 0.0}, {0.25, 0.05, 0.0}}};
  EXPECT_TRUE(score(clear, {{1.0, 0.0}}, {1.0, 0.0}, local, {}));
}

TEST(Score, UnknownCountsAsConfigured) {
  const WorldCostmap local(40, 40, 0.1, -2.0, -2.0, -1);
  Trajectory t{{}, {{0.0, 0.0, 0.0}}};
  const auto s = score(t, {{0.0, 0.0}}, {0.0, 0.0}, local, {});
  ASSERT_TRUE(s);
  EXPECT_DOUBLE_EQ(s->obs, 50.0);
}

TEST(Select, GoalAheadGoesStraight) {
  const WorldCostmap local(60, 60, 0.1, -3.0, -3.0, 0);
  std::vector<planner::Waypoint> path;
  for (int i = 0; i <= 40; ++i) path.push_back({0.05 * i, 0.0});
  const auto sel = select_command({0.2, 0.0}, {}, path, {2.0, 0.0}, local, {});
  ASSERT_TRUE(sel);
  EXPECT_NEAR(sel->command.omega, 0.0, 1e-12);
  EXPECT_GT(sel->command.v, 0.2);
}

TEST(Select, GoalBehindTurns) {
  const WorldCostmap local(60, 60, 0.1, -3.0, -3.0, 0);
  const auto sel = select_command({0.0, 0.0}, {}, {{0.0, 0.0}, {-2.0, 0.3}}, {-2.0, 0.3}, local, {});
  ASSERT_TRUE(sel);
  EXPECT_GT(std::abs(sel->command.omega), 0.0);
}

TEST(Select, BoxedInRejectsEverything) {
  WorldCostmap local(60, 60, 0.1, -3.0, -3.0, 0);
  for (int r = 27; r <= 32; ++r)
    for (int c = 27; c <= 32; ++c)
      if (r == 27 || r == 32 || c == 27 || c == 32) local.set({r, c}, 100);
  EXPECT_FALSE(select_command({0.0, 0.0}, {0.05, 0.05, 0.0}, {{2.0, 0.0}}, {2.0, 0.0}, local, {}));
}

TEST(Select, StaysInsideWindow) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> v(-0.3, 0.5), w(-1.0, 1.0);
  const ControllerConfig cfg;
  const WorldCostmap local(60, 60, 0.1, -3.0, -3.0, 0);
  for (int i = 0; i < 200; ++i) {
    const Twist cur{v(rng), w(rng)};
    const auto sel = select_command(cur, {}, {{1.0, 1.0}}, {1.0, 1.0}, local, cfg);
    ASSERT_TRUE(sel);
    const auto win = dynamic_window(cur, cfg);
    EXPECT_TRUE(win.v.contains(sel->command.v));
    EXPECT_TRUE(win.omega.contains(sel->command.omega));
  }
}

TEST(ControllerConfig, Validation) {
  ControllerConfig cfg;
  cfg.samples_v = 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
