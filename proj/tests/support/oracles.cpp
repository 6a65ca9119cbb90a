#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <utility>

namespace oracle {

using terranav::CellIndex;
using terranav::costmap::WorldCostmap;

namespace {

bool passable(const WorldCostmap& w, int r, int c, const terranav::planner::PlannerConfig& cfg, int& cost) {
  if (r < 0 || c < 0 || r >= w.rows() || c >= w.cols()) return false;
  int v = w.at({r, c});
  if (v < 0) {
    if (cfg.unknown_blocked) return false;
    v = cfg.unknown_cost_value;
  }
  if (v >= 100) return false;
  cost = v;
  return true;
}

}  // namespace

std::optional<double> dijkstra(const WorldCostmap& world, CellIndex start, CellIndex goal,
                               const terranav::planner::PlannerConfig& cfg, double c_d) {
  const int rows = world.rows(), cols = world.cols();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(rows) * cols, inf);
  int dummy;
  if (!passable(world, start.row, start.col, cfg, dummy) || !passable(world, goal.row, goal.col, cfg, dummy)) {
    return std::nullopt;
  }
  std::set<std::pair<double, int>> frontier;
  const int s = start.row * cols + start.col;
  dist[s] = 0.0;
  frontier.insert({0.0, s});
  while (!frontier.empty()) {
    const auto [d, u] = *frontier.begin();
    frontier.erase(frontier.begin());
    const int r = u / cols, c = u % cols;
    if (r == goal.row && c == goal.col) return d;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (!dr && !dc) continue;
        int cost;
        if (!passable(world, r + dr, c + dc, cfg, cost)) continue;
        const bool diag = dr && dc;
        if (diag) {
          int tmp;
          if (!passable(world, r + dr, c, cfg, tmp) || !passable(world, r, c + dc, cfg, tmp)) continue;
        }
        const double len = diag ? std::sqrt(2.0) * world.resolution() : world.resolution();
        const double nd = d + len * (1.0 + cfg.w_t * (cost / 100.0) + c_d);
        const int v = (r + dr) * cols + c + dc;
        if (nd < dist[v]) {
          frontier.erase({dist[v], v});
          dist[v] = nd;
          frontier.insert({nd, v});
        }
      }
    }
  }
  return std::nullopt;
}

double naive_cnn(const terranav::traversability::CnnModel& model, const terranav::traversability::Patch& patch) {
  const auto& layers = model.layers();
  int ch = 1, side = patch.side;
  std::vector<double> act(patch.heights.begin(), patch.heights.end());
  for (int l = 0; l < 3; ++l) {
    const auto& L = layers[l];
    const int filters = L.shape.dims[0];
    const int conv_side = side - 2, pooled = conv_side / 2;
    std::vector<double> out(static_cast<std::size_t>(filters) * pooled * pooled);
    auto conv_at = [&](int f, int y, int x) {
      double acc = L.biases[f];
      for (int c = 0; c < ch; ++c)
        for (int ky = 0; ky < 3; ++ky)
          for (int kx = 0; kx < 3; ++kx)
            acc += static_cast<double>(L.weights[((f * ch + c) * 3 + ky) * 3 + kx]) *
                   act[(static_cast<std::size_t>(c) * side + y + ky) * side + x + kx];
      return std::max(acc, 0.0);
    };
    for (int f = 0; f < filters; ++f)
      for (int y = 0; y < pooled; ++y)
        for (int x = 0; x < pooled; ++x)
          out[(static_cast<std::size_t>(f) * pooled + y) * pooled + x] =
              std::max({conv_at(f, 2 * y, 2 * x), conv_at(f, 2 * y, 2 * x + 1), conv_at(f, 2 * y + 1, 2 * x),
                        conv_at(f, 2 * y + 1, 2 * x + 1)});
    act = std::move(out);
    ch = filters;
    side = pooled;
  }
  for (int l = 3; l < 6; ++l) {
    const auto& L = layers[l];
    const int outs = L.shape.dims[0], ins = L.shape.dims[1];
    std::vector<double> out(outs);
    for (int o = 0; o < outs; ++o) {
      double acc = L.biases[o];
      for (int i = 0; i < ins; ++i) acc += static_cast<double>(L.weights[static_cast<std::size_t>(o) * ins + i]) * act[i];
      out[o] = l < 5 ? std::max(acc, 0.0) : acc;
    }
    act = std::move(out);
  }
  return 1.0 / (1.0 + std::exp(-act[0]));
}

Gaussian batch_fuse(const std::vector<double>& z, const std::vector<double>& var) {
  double precision = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    precision += 1.0 / var[i];
    weighted += z[i] / var[i];
  }
  return {weighted / precision, 1.0 / precision};
}

WorldCostmap random_costmap(std::mt19937_64& rng, int side, double resolution, double lethal, double unknown) {
  WorldCostmap w(side, side, resolution, 0.0, 0.0, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> cost(0, 99);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const double p = u(rng);
      w.set({r, c}, p < lethal ? 100 : (p < lethal + unknown ? -1 : cost(rng)));
    }
  }
  return w;
}

terranav::traversability::Patch random_patch(std::mt19937_64& rng, double amplitude) {
  terranav::traversability::Patch p;
  p.side = 48;
  p.resolution = 0.04;
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  p.heights.resize(48 * 48);
  for (auto& h : p.heights) h = u(rng);
  return p;
}

std::filesystem::path scratch_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("terranav_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

bool same_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  return std::equal(std::istreambuf_iterator<char>(fa), {}, std::istreambuf_iterator<char>(fb), {});
}

}  // namespace oracle
