#include "terranav/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>

#include "terranav/raster.hpp"

namespace terranav::planner {

using costmap::kLethalCost;
using costmap::kUnknownCost;
using costmap::WorldCostmap;

std::optional<int> PlannerConfig::effective_cost(int stored) const {
  if (stored == kUnknownCost) {
    if (unknown_blocked) return std::nullopt;
    stored = unknown_cost_value;
  }
  if (stored >= kLethalCost) return std::nullopt;
  return stored;
}

PlannerConfig PlannerConfig::preset(Preset p) {
  PlannerConfig cfg;
  switch (p) {
    case Preset::Standard:
      cfg.w_t = 20.0;
      break;
    case Preset::Offline:
      // No energy term.
      cfg.w_t = 8.0;
      cfg.c_d_override = 0.0;
      break;
  }
  return cfg;
}

std::optional<Preset> preset_from_name(std::string_view name) {
  if (name == "standard") return Preset::Standard;
  if (name == "offline") return Preset::Offline;
  return std::nullopt;
}

std::string_view preset_name(Preset p) { return p == Preset::Standard ? "standard" : "offline"; }

std::string_view failure_name(Failure f) {
  switch (f) {
    case Failure::None: return "none";
    case Failure::StartOutOfBounds: return "start_out_of_bounds";
    case Failure::GoalOutOfBounds: return "goal_out_of_bounds";
    case Failure::StartLethal: return "start_lethal";
    case Failure::GoalLethal: return "goal_lethal";
    case Failure::NoPath: return "no_path";
    case Failure::Timeout: return "timeout";
  }
  return "unknown";
}

double edge_cost(double d, int cell_cost, const PlannerConfig& cfg, const EnergyModel& energy) {
  const double t = cell_cost / 100.0;
  return d * (1.0 + cfg.w_t * t + cfg.energy_per_meter(energy));
}

namespace {

struct QueueEntry {
  double f;
  double h;
  std::uint64_t seq;
  std::uint32_t node;

  // Min-heap order: lower f, then lower h, then earlier push.
  bool operator>(const QueueEntry& o) const {
    if (f != o.f) return f > o.f;
    if (h != o.h) return h > o.h;
    return seq > o.seq;
  }
};

constexpr std::array<std::array<int, 2>, 8> kMoves{{{0, 1}, {1, 0}, {0, -1}, {-1, 0},
                                                    {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

}  // namespace

PlanOutcome plan(const WorldCostmap& world, Waypoint start, Waypoint goal, const PlannerConfig& cfg,
                 const EnergyModel& energy) {
  PlanOutcome out;
  const auto s = world.world_to_cell(start[0], start[1]);
  const auto g = world.world_to_cell(goal[0], goal[1]);
  if (!s) {
    out.cause = Failure::StartOutOfBounds;
    return out;
  }
  if (!g) {
    out.cause = Failure::GoalOutOfBounds;
    return out;
  }
  if (!cfg.effective_cost(world.at(*s))) {
    out.cause = Failure::StartLethal;
    return out;
  }
  if (!cfg.effective_cost(world.at(*g))) {
    out.cause = Failure::GoalLethal;
    return out;
  }

  const double res = world.resolution();
  const int rows = world.rows(), cols = world.cols();
  const auto node_of = [cols](CellIndex c) { return static_cast<std::uint32_t>(c.row * cols + c.col); };
  const auto cell_of = [cols](std::uint32_t n) {
    return CellIndex{static_cast<int>(n / cols), static_cast<int>(n % cols)};
  };
  const auto heuristic = [&](CellIndex c) { return std::hypot(c.row - g->row, c.col - g->col) * res; };

  const std::size_t n_cells = static_cast<std::size_t>(rows) * cols;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<double> best_g(n_cells, kInf);
  std::vector<std::uint32_t> parent(n_cells, kNone);
  std::vector<unsigned char> closed(n_cells, 0);

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  std::uint64_t seq = 0;
  const std::uint32_t start_node = node_of(*s), goal_node = node_of(*g);
  best_g[start_node] = 0.0;
  open.push({heuristic(*s), heuristic(*s), seq++, start_node});

  const auto t0 = std::chrono::steady_clock::now();
  const double c_d = cfg.energy_per_meter(energy);
  const double diag = std::numbers::sqrt2 * res;

  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    if (closed[top.node]) continue;
    closed[top.node] = 1;
    ++out.expansions;

    if (top.node == goal_node) {
      PlanResult r;
      r.g_total = best_g[goal_node];
      r.expansions = out.expansions;
      std::vector<std::uint32_t> chain;
      for (std::uint32_t n = goal_node; n != kNone; n = parent[n]) chain.push_back(n);
      std::reverse(chain.begin(), chain.end());
      for (std::size_t i = 0; i < chain.size(); ++i) {
        const CellIndex c = cell_of(chain[i]);
        r.waypoints.push_back(world.cell_center(c));
        if (i == 0) continue;
        const CellIndex p = cell_of(chain[i - 1]);
        const double d = (p.row != c.row && p.col != c.col) ? diag : res;
        const int cost = *cfg.effective_cost(world.at(c));
        r.distance_total += d;
        r.terrain_cost_total += d * cfg.w_t * (cost / 100.0);
        r.terrain_exposure += d * (cost / 100.0);
      }
      out.result = std::move(r);
      return out;
    }

    if ((out.expansions & 0xFFF) == 0) {
      if (cfg.max_expansions && out.expansions >= cfg.max_expansions) {
        out.cause = Failure::Timeout;
        return out;
      }
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (elapsed > cfg.timeout_s) {
        out.cause = Failure::Timeout;
        return out;
      }
    }

    const CellIndex cur = cell_of(top.node);
    const double g_cur = best_g[top.node];
    for (std::size_t m = 0; m < kMoves.size(); ++m) {
      const CellIndex nb{cur.row + kMoves[m][0], cur.col + kMoves[m][1]};
      if (!world.contains(nb)) continue;
      const std::uint32_t nn = node_of(nb);
      if (closed[nn]) continue;
      const auto cost = cfg.effective_cost(world.at(nb));
      if (!cost) continue;
      const bool diagonal = m >= 4;
      if (diagonal) {
        if (!cfg.effective_cost(world.at({cur.row + kMoves[m][0], cur.col})) ||
            !cfg.effective_cost(world.at({cur.row, cur.col + kMoves[m][1]}))) {
          continue;
        }
      }
      const double d = diagonal ? diag : res;
      const double g_new = g_cur + d * (1.0 + cfg.w_t * (*cost / 100.0) + c_d);
      if (!(g_new < best_g[nn])) continue;
      best_g[nn] = g_new;
      parent[nn] = top.node;
      const double h = heuristic(nb);
      open.push({g_new + h, h, seq++, nn});
    }
  }
  out.cause = Failure::NoPath;
  return out;
}

PathMetrics segment_metrics(const Waypoint& a, const Waypoint& b, const WorldCostmap& world,
                            const PlannerConfig& cfg, const EnergyModel& energy) {
  PathMetrics m;
  const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
  const double c_d = cfg.energy_per_meter(energy);
  const GridFrame frame{world.origin_x(), world.origin_y(), world.resolution()};
  traverse_segment(frame, a[0], a[1], b[0], b[1], [&](CellIndex c, double t_in, double t_out) {
    std::optional<int> cost;
    if (world.contains(c)) cost = cfg.effective_cost(world.at(c));
    if (!cost) {
      m.crosses_lethal = true;
      if (world.contains(c)) m.max_cell_cost = std::max(m.max_cell_cost, std::min<int>(world.at(c), 100));
      return true;
    }
    const double piece = (t_out - t_in) * len;
    if (piece > 0.0 || len == 0.0) m.max_cell_cost = std::max(m.max_cell_cost, *cost);
    m.distance += piece;
    m.terrain_cost += piece * cfg.w_t * (*cost / 100.0);
    m.terrain_exposure += piece * (*cost / 100.0);
    m.hybrid_cost += piece * (1.0 + cfg.w_t * (*cost / 100.0) + c_d);
    return true;
  });
  return m;
}

PathMetrics path_metrics(const std::vector<Waypoint>& waypoints, const WorldCostmap& world,
                         const PlannerConfig& cfg, const EnergyModel& energy) {
  PathMetrics total;
  if (waypoints.size() == 1) {
    const auto c = world.cost_at(waypoints[0][0], waypoints[0][1]);
    if (c) {
      const auto eff = cfg.effective_cost(*c);
      total.max_cell_cost = eff ? *eff : std::min(*c, 100);
      total.crosses_lethal = !eff;
    }
    return total;
  }
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const PathMetrics m = segment_metrics(waypoints[i], waypoints[i + 1], world, cfg, energy);
    total.distance += m.distance;
    total.terrain_cost += m.terrain_cost;
    total.terrain_exposure += m.terrain_exposure;
    total.hybrid_cost += m.hybrid_cost;
    total.max_cell_cost = std::max(total.max_cell_cost, m.max_cell_cost);
    total.crosses_lethal = total.crosses_lethal || m.crosses_lethal;
  }
  return total;
}

PlanResult prune_line_of_sight(const PlanResult& result, const WorldCostmap& world,
                               const PlannerConfig& cfg, const EnergyModel& energy) {
  PlanResult out = result;
  out.pruned = true;
  const auto& wp = result.waypoints;
  if (wp.size() <= 2) return out;

  // Prefix sums of the integrated cost along the original path.
  std::vector<double> prefix(wp.size(), 0.0);
  for (std::size_t i = 1; i < wp.size(); ++i) {
    prefix[i] = prefix[i - 1] + segment_metrics(wp[i - 1], wp[i], world, cfg, energy).hybrid_cost;
  }

  std::vector<Waypoint> kept{wp.front()};
  std::size_t anchor = 0;
  while (anchor + 1 < wp.size()) {
    std::size_t next = anchor + 1;
    for (std::size_t k = anchor + 2; k < wp.size(); ++k) {
      const PathMetrics m = segment_metrics(wp[anchor], wp[k], world, cfg, energy);
      if (m.crosses_lethal) break;
      const double along = prefix[k] - prefix[anchor];
      if (m.hybrid_cost > along + 1e-9 * (1.0 + along)) break;
      next = k;
    }
    kept.push_back(wp[next]);
    anchor = next;
  }
  out.waypoints = std::move(kept);
  const PathMetrics m = path_metrics(out.waypoints, world, cfg, energy);
  out.distance_total = m.distance;
  out.terrain_cost_total = m.terrain_cost;
  out.terrain_exposure = m.terrain_exposure;
  return out;
}

CompareOutcome compare(const WorldCostmap& world, Waypoint start, Waypoint goal, const PlannerConfig& cfg,
                       const EnergyModel& energy) {
  CompareOutcome out;
  auto aware = plan(world, start, goal, cfg, energy);
  if (!aware.ok()) {
    out.cause = aware.cause;
    return out;
  }
  PlannerConfig base_cfg = cfg;
  base_cfg.w_t = 0.0;
  auto base = plan(world, start, goal, base_cfg, energy);
  if (!base.ok()) {
    out.cause = base.cause;
    return out;
  }
  Comparison c{std::move(*aware.result), std::move(*base.result)};
  if (c.baseline.distance_total > 0.0) {
    c.distance_increase_pct = 100.0 * (c.aware.distance_total / c.baseline.distance_total - 1.0);
  }
  if (c.baseline.terrain_exposure > 0.0) {
    c.terrain_reduction_pct = 100.0 * (1.0 - c.aware.terrain_exposure / c.baseline.terrain_exposure);
  }
  out.comparison = std::move(c);
  return out;
}

}  // namespace terranav::planner
