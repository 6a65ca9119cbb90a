#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "oracles.hpp"

namespace {

const std::filesystem::path kScenarios = TERRANAV_SCENARIO_DIR;

int run(const std::string& args) {
  const std::string cmd = std::string(TERRANAV_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, SimulateFlatWritesReport) {
  const auto out = oracle::scratch_dir("cli_sim");
  ASSERT_EQ(run("simulate --scenario " + (kScenarios / "flat.yaml").string() + " --out " + out.string()), 0);
  for (const char* f : {"trajectory.csv", "plans.csv", "events.csv", "summary.json", "manifest.json", "costmap.pgm"}) {
    EXPECT_TRUE(std::filesystem::exists(out / f)) << f;
  }
  std::ifstream in(out / "manifest.json");
  const auto manifest = nlohmann::json::parse(in);
  EXPECT_EQ(manifest["command"], "simulate");
  EXPECT_TRUE(manifest.contains("outputs"));
}

TEST(Cli, SimulateIsReproducible) {
  const auto a = oracle::scratch_dir("cli_rep_a"), b = oracle::scratch_dir("cli_rep_b");
  const auto scenario = (kScenarios / "flat.yaml").string();
  ASSERT_EQ(run("simulate --scenario " + scenario + " --out " + a.string()), 0);
  ASSERT_EQ(run("simulate --scenario " + scenario + " --out " + b.string()), 0);
  for (const auto& e : std::filesystem::directory_iterator(a)) {
    // The manifest records the output directory argument.
    if (e.path().filename() == "manifest.json") continue;
    EXPECT_TRUE(oracle::same_bytes(e.path(), b / e.path().filename())) << e.path().filename();
  }
}

TEST(Cli, ExitCodes) {
  const auto out = oracle::scratch_dir("cli_codes");
  EXPECT_EQ(run("simulate --scenario /nonexistent/x.yaml --out " + out.string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("simulate --scenario " + (kScenarios / "flat.yaml").string() + " --duration 2 --out " + out.string()), 3);
  EXPECT_EQ(run("simulate --scenario " + (kScenarios / "sealed.yaml").string() + " --out " + out.string()), 0);
}

TEST(Cli, RenderThenPlanCompare) {
  const auto dir = oracle::scratch_dir("cli_plan");
  ASSERT_EQ(run("render --scenario " + (kScenarios / "cloth.yaml").string() + " --resolution 0.1 --out " +
                (dir / "map").string()),
            0);
  const auto map = (dir / "map" / "costmap.pgm").string();
  ASSERT_EQ(run("plan --costmap " + map + " --start -4,0 --goal 4,0 --preset offline --compare --out " +
                (dir / "cmp").string()),
            0);
  EXPECT_TRUE(std::filesystem::exists(dir / "cmp" / "comparison.csv"));
  // Goal on the lethal-free map but outside it.
  EXPECT_EQ(run("plan --costmap " + map + " --start -4,0 --goal 40,0 --out " + (dir / "bad").string()), 3);
  EXPECT_EQ(run("plan --costmap " + map + " --start -4 --goal 4,0 --out " + (dir / "bad").string()), 2);
}

TEST(Cli, Geobench) {
  const auto dir = oracle::scratch_dir("cli_geo");
  {
    std::ofstream ref(dir / "ref.xyz"), q(dir / "q.xyz");
    for (int i = 0; i <= 10; ++i)
      for (int j = 0; j <= 10; ++j) {
        ref << i * 0.1 << ' ' << j * 0.1 << " 0\n";
        q << i * 0.1 + 0.03 << ' ' << j * 0.1 + 0.02 << " 0.001\n";
      }
    std::ofstream(dir / "empty.xyz");
  }
  EXPECT_EQ(run("geobench --mode c2c --input " + (dir / "q.xyz").string() + " --reference " +
                (dir / "ref.xyz").string() + " --out " + (dir / "c2c").string()),
            0);
  EXPECT_EQ(run("geobench --mode c2c --input " + (dir / "empty.xyz").string() + " --reference " +
                (dir / "ref.xyz").string() + " --out " + (dir / "c2c_empty").string()),
            2);
}
