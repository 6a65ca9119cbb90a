#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "terranav/decision.hpp"

using namespace terranav;
using namespace terranav::decision;

TEST(GroundCost, Examples) {
  const costmap::WorldCostmap zero(30, 30, 0.1, 0.0, 0.0, 0);
  EXPECT_FALSE(ground_cost({}, zero));
  EXPECT_EQ(*ground_cost({{0.05, 0.05}}, zero), 0.0);
  EXPECT_NEAR(*ground_cost({{0.05, 0.05}, {1.05, 0.05}}, zero), 75.5, 1e-9);
  const double once = *ground_cost({{0.05, 0.05}, {1.05, 0.05}}, zero);
  const double twice = *ground_cost({{0.05, 0.05}, {1.05, 0.05}, {0.05, 0.05}}, zero);
  EXPECT_NEAR(twice, 2.0 * once, 1e-9);
}

TEST(AerialCost, Affine) {
  EXPECT_DOUBLE_EQ(aerial_cost(0.0), 600.0);
  EXPECT_DOUBLE_EQ(aerial_cost(10.0), 4600.0);
  EXPECT_DOUBLE_EQ(aerial_cost(3.0) - aerial_cost(2.0), 400.0);
  EXPECT_THROW(aerial_cost(-1.0), std::invalid_argument);
}

TEST(Monitor, SpinNeedsTwoEpisodes) {
  FailureMonitor m;
  Cause c = Cause::None;
  for (double t = 0.0; t <= 1.2; t += 0.1) c = m.update({0.5, 0.0, 5.0}, t);
  EXPECT_EQ(c, Cause::None);
  EXPECT_EQ(m.spin_episodes(), 1);
  m.update({0.0, 0.3, 5.0}, 1.3);
  for (double t = 1.4; t <= 2.7; t += 0.1) c = m.update({-0.5, 0.0, 5.0}, t);
  EXPECT_EQ(c, Cause::Spin);
}

TEST(Monitor, NoPathTwice) {
  FailureMonitor m;
  m.record_plan(true, 0);
  EXPECT_EQ(m.update({}, 0.0), Cause::None);
  m.record_plan(true, 0);
  EXPECT_EQ(m.update({}, 0.1), Cause::NoPath);
  m.record_plan(false, 10);
  EXPECT_EQ(m.update({}, 0.2), Cause::None);
}

TEST(Monitor, Impassable) {
  FailureMonitor m;
  m.record_plan(false, 80);
  EXPECT_EQ(m.update({}, 0.0), Cause::None);
  m.record_plan(false, 85);
  EXPECT_EQ(m.update({}, 0.1), Cause::Impassable);
}

TEST(Monitor, Stuck) {
  FailureMonitor m;
  Cause c = Cause::None;
  for (int i = 0; i <= 100; ++i) c = m.update({0.0, 0.1, 5.0 - 0.0005 * i}, 0.1 * i);
  EXPECT_EQ(c, Cause::Stuck);

  FailureMonitor moving;
  for (int i = 0; i <= 100; ++i) c = moving.update({0.0, 0.1, 5.0 - 0.01 * i}, 0.1 * i);
  EXPECT_EQ(c, Cause::None);
}

TEST(Monitor, RetryLoopWindow) {
  FailureMonitor m;
  m.record_abort(0.0);
  m.record_abort(25.0);
  EXPECT_EQ(m.update({}, 25.0), Cause::None);
  m.record_abort(30.0);
  EXPECT_EQ(m.update({}, 30.0), Cause::RetryLoop);
  m.reset();
  EXPECT_EQ(m.update({}, 31.0), Cause::None);
}

TEST(SelectMode, Examples) {
  const ModeState ground;
  auto s = select_mode(ground, 5000.0, 4600.0, Cause::None, 1.0);
  EXPECT_EQ(s.mode, Mode::Aerial);
  EXPECT_EQ(s.last_cause, Cause::Cost);
  EXPECT_DOUBLE_EQ(s.last_switch_time, 1.0);

  const ModeState aerial{Mode::Aerial, 0.0, Cause::Cost};
  EXPECT_EQ(select_mode(aerial, 0.9 * 4600.0, 4600.0, Cause::None, 1.0).mode, Mode::Aerial);
  EXPECT_EQ(select_mode(aerial, 0.7 * 4600.0, 4600.0, Cause::None, 1.0).mode, Mode::Ground);

  s = select_mode(ground, 10.0, 4600.0, Cause::NoPath, 2.0);
  EXPECT_EQ(s.mode, Mode::Aerial);
  EXPECT_EQ(s.last_cause, Cause::NoPath);

  EXPECT_EQ(select_mode(ground, std::nullopt, 4600.0, Cause::None, 1.0).mode, Mode::Aerial);
}

TEST(SelectMode, NoTwoCycles) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> c(0.0, 10000.0);
  for (int i = 0; i < 2000; ++i) {
    const double g = c(rng), a = c(rng);
    for (Mode m : {Mode::Ground, Mode::Aerial}) {
      const auto s1 = select_mode({m, 0.0, Cause::None}, g, a, Cause::None, 1.0);
      EXPECT_EQ(select_mode(s1, g, a, Cause::None, 2.0).mode, s1.mode);
    }
  }
}

TEST(Events, CsvRow) {
  std::ostringstream out;
  write_event_header(out);
  write_event(out, {10.4, Cause::NoPath, std::nullopt, 2600.0, Mode::Ground, Mode::Aerial});
  EXPECT_NE(out.str().find("10.4,no_path,inf,2600,ground,aerial"), std::string::npos);
}
