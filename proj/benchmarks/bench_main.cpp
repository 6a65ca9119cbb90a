#include <benchmark/benchmark.h>

#include <random>

#include "terranav/cnn.hpp"
#include "terranav/controller.hpp"
#include "terranav/elevation.hpp"
#include "terranav/geobench.hpp"
#include "terranav/planner.hpp"
#include "terranav/simworld.hpp"

using namespace terranav;

namespace {

PointCloud random_cloud(std::size_t n, double half, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xy(-half, half), z(-0.05, 0.05);
  PointCloud c;
  c.frame = Frame::Map;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back({xy(rng), xy(rng), z(rng)});
  return c;
}

void BM_IntegrateCloud(benchmark::State& state) {
  GridGeometry geo;
  geo.origin_x = geo.origin_y = -2.5;
  const auto cloud = random_cloud(static_cast<std::size_t>(state.range(0)), 2.5, 1);
  GridMap map(geo);
  for (auto _ : state) {
    benchmark::DoNotOptimize(elevation::integrate_cloud(map, cloud, {0.0, 0.0, 0.5}, {}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateCloud)->Arg(1000)->Arg(10000);

void BM_CnnForward(benchmark::State& state) {
  const auto model = traversability::CnnModel::random(3);
  traversability::Patch p;
  p.side = 48;
  p.resolution = 0.04;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> h(-0.1, 0.1);
  for (int i = 0; i < 48 * 48; ++i) p.heights.push_back(h(rng));
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(p));
}
BENCHMARK(BM_CnnForward);

void BM_PlanRandomMap(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  costmap::WorldCostmap w(side, side, 0.1, 0.0, 0.0, 0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // 15% lethal, the rest uniform 0..99.
  for (int r = 0; r < side; ++r)
    for (int k = 0; k < side; ++k) w.set({r, k}, u(rng) < 0.15 ? 100 : static_cast<int>(u(rng) * 100));
  w.set({0, 0}, 0);
  w.set({side - 1, side - 1}, 0);
  const auto cfg = planner::PlannerConfig::preset(planner::Preset::Standard);
  for (auto _ : state) {
    benchmark::DoNotOptimize(planner::plan(w, w.cell_center({0, 0}), w.cell_center({side - 1, side - 1}), cfg));
  }
}
BENCHMARK(BM_PlanRandomMap)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SelectCommand(benchmark::State& state) {
  const costmap::WorldCostmap local(60, 60, 0.1, -3.0, -3.0, 10);
  const control::ControllerConfig cfg;
  const std::vector<planner::Waypoint> path{{0.0, 0.0}, {1.0, 0.5}, {2.0, 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(control::select_command({0.2, 0.1}, {}, path, {2.0, 1.0}, local, cfg));
  }
}
BENCHMARK(BM_SelectCommand);

void BM_Delaunay(benchmark::State& state) {
  const auto cloud = random_cloud(static_cast<std::size_t>(state.range(0)), 10.0, 5);
  for (auto _ : state) benchmark::DoNotOptimize(geobench::delaunay_2_5d(cloud));
}
BENCHMARK(BM_Delaunay)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CloudToMesh(benchmark::State& state) {
  const auto mesh = geobench::delaunay_2_5d(random_cloud(5000, 10.0, 6));
  const auto query = random_cloud(10000, 10.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(geobench::cloud_to_mesh_stats(query, mesh));
}
BENCHMARK(BM_CloudToMesh)->Unit(benchmark::kMillisecond);

void BM_Allan(benchmark::State& state) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (auto& v : x) v = n(rng);
  const auto taus = geobench::log_spaced_taus(x.size(), 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(geobench::allan_deviation(x, 100.0, taus));
}
BENCHMARK(BM_Allan)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_SimulateFlat(benchmark::State& state) {
  const auto cfg = sim::load_scenario(std::filesystem::path(TERRANAV_SCENARIO_DIR) / "flat.yaml");
  double sim_time = 0.0;
  for (auto _ : state) {
    const auto r = sim::run_loop(cfg);
    sim_time += r.sim_time;
  }
  state.counters["sim_s_per_iter"] = sim_time / static_cast<double>(state.iterations());
}
BENCHMARK(BM_SimulateFlat)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
