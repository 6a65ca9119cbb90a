#include "terranav/costmap.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "terranav/ascii_grid.hpp"

namespace terranav::costmap {

void CostmapConfig::validate() const {
  if (!(0.0 < t_crit && t_crit < t_high && t_high <= 1.0)) {
    throw std::invalid_argument("costmap: need 0 < t_crit < t_high <= 1");
  }
  if (!(resolution > 0.0)) throw std::invalid_argument("costmap: resolution must be positive");
  if (init_cost < kUnknownCost || init_cost > kLethalCost) {
    throw std::invalid_argument("costmap: init_cost outside [-1, 100]");
  }
}

int traversability_to_cost(double t, const CostmapConfig& cfg) {
  if (std::isnan(t) || t < 0.0) return kUnknownCost;
  if (t >= cfg.t_high) return 0;
  double c;
  if (t >= cfg.t_crit) {
    c = tolerant_floor(20.0 * (cfg.t_high - t) / (cfg.t_high - cfg.t_crit));
  } else {
    c = tolerant_floor(100.0 - 80.0 * t / cfg.t_crit);
  }
  return std::clamp(static_cast<int>(c), 0, kLethalCost);
}

WorldCostmap::WorldCostmap(const CostmapConfig& cfg)
    : WorldCostmap(cells_for_extent(cfg.size_y, cfg.resolution),
                   cells_for_extent(cfg.size_x, cfg.resolution), cfg.resolution, cfg.origin_x,
                   cfg.origin_y, cfg.init_cost) {
  cfg.validate();
}

WorldCostmap::WorldCostmap(int rows, int cols, double resolution, double origin_x, double origin_y,
                           int fill)
    : rows_(rows),
      cols_(cols),
      resolution_(resolution),
      origin_x_(origin_x),
      origin_y_(origin_y),
      cells_(static_cast<std::size_t>(rows) * cols, static_cast<std::int8_t>(fill)) {
  if (rows <= 0 || cols <= 0 || !(resolution > 0.0)) {
    throw std::invalid_argument("costmap: bad dimensions");
  }
  if (fill < kUnknownCost || fill > kLethalCost) throw std::invalid_argument("costmap: bad fill cost");
}

std::optional<CellIndex> WorldCostmap::world_to_cell(double x, double y) const {
  const double u = tolerant_floor((x - origin_x_) / resolution_);
  const double v = tolerant_floor((y - origin_y_) / resolution_);
  if (!(u >= 0.0 && u < cols_ && v >= 0.0 && v < rows_)) return std::nullopt;
  return CellIndex{static_cast<int>(v), static_cast<int>(u)};
}

std::array<double, 2> WorldCostmap::cell_center(CellIndex idx) const {
  return {origin_x_ + (idx.col + 0.5) * resolution_, origin_y_ + (idx.row + 0.5) * resolution_};
}

void WorldCostmap::set(CellIndex idx, int cost) {
  if (cost < kUnknownCost || cost > kLethalCost) throw std::out_of_range("cost outside [-1, 100]");
  cells_[offset(idx)] = static_cast<std::int8_t>(cost);
}

std::optional<int> WorldCostmap::cost_at(double x, double y) const {
  const auto idx = world_to_cell(x, y);
  if (!idx) return std::nullopt;
  return at(*idx);
}

Window update_window(const GridMap& local, const Pose2D& robot, const CostmapConfig& cfg) {
  const double half = 0.5 * cfg.crop_extent;
  Window w{std::max(robot.x - half, local.origin_x()), std::max(robot.y - half, local.origin_y()),
           std::min(robot.x + half, local.origin_x() + local.size_x()),
           std::min(robot.y + half, local.origin_y() + local.size_y())};
  w.x_min += cfg.edge_buffer;
  w.y_min += cfg.edge_buffer;
  w.x_max -= cfg.edge_buffer;
  w.y_max -= cfg.edge_buffer;
  return w;
}

ApplyStats apply_update(WorldCostmap& world, const GridMap& local, const Pose2D& robot,
                        const CostmapConfig& cfg) {
  ApplyStats stats;
  ++world.update_count();
  if (world.update_count() <= static_cast<std::uint64_t>(cfg.warmup_messages)) {
    stats.warmup = true;
    return stats;
  }
  const Window w = update_window(local, robot, cfg);
  if (!(w.x_min < w.x_max && w.y_min < w.y_max)) return stats;

  const double wx_max = world.origin_x() + world.cols() * world.resolution();
  const double wy_max = world.origin_y() + world.rows() * world.resolution();
  if (w.x_max <= world.origin_x() || w.x_min >= wx_max || w.y_max <= world.origin_y() ||
      w.y_min >= wy_max) {
    stats.outside_world = true;
    return stats;
  }

  const auto& trav = local.layer(Layer::Traversability);
  const double res = local.resolution();
  const int c0 = std::max(0, static_cast<int>(std::floor((w.x_min - local.origin_x()) / res)));
  const int r0 = std::max(0, static_cast<int>(std::floor((w.y_min - local.origin_y()) / res)));
  const int c1 = std::min(local.cols() - 1, static_cast<int>(std::floor((w.x_max - local.origin_x()) / res)));
  const int r1 = std::min(local.rows() - 1, static_cast<int>(std::floor((w.y_max - local.origin_y()) / res)));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const auto [x, y] = local.cell_center({r, c});
      if (x < w.x_min || x > w.x_max || y < w.y_min || y > w.y_max) continue;
      const int cost = traversability_to_cost(trav[local.offset({r, c})], cfg);
      if (cost == kUnknownCost) continue;
      const auto target = world.world_to_cell(x, y);
      if (!target) continue;
      world.set(*target, cost);
      ++stats.cells_updated;
    }
  }
  return stats;
}

std::filesystem::path sidecar_path(const std::filesystem::path& pgm_path) {
  auto p = pgm_path;
  p.replace_extension(".yaml");
  return p;
}

void render_costmap(const WorldCostmap& world, const std::filesystem::path& pgm_path) {
  {
    std::ofstream out(pgm_path);
    if (!out) throw std::runtime_error("cannot write " + pgm_path.string());
    out << "P2\n" << world.cols() << ' ' << world.rows() << "\n255\n";
    for (int r = world.rows() - 1; r >= 0; --r) {
      for (int c = 0; c < world.cols(); ++c) {
        const int v = world.at({r, c});
        if (c) out << ' ';
        out << (v == kUnknownCost ? 255 : v);
      }
      out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + pgm_path.string());
  }
  const auto meta = sidecar_path(pgm_path);
  std::ofstream out(meta);
  if (!out) throw std::runtime_error("cannot write " + meta.string());
  out << std::setprecision(17) << "image: " << pgm_path.filename().string() << "\n"
      << "resolution: " << world.resolution() << "\n"
      << "origin: [" << world.origin_x() << ", " << world.origin_y() << ", 0.0]\n"
      << "unknown_value: 255\n";
  if (!out) throw std::runtime_error("write failed for " + meta.string());
}

namespace {

// P2 tokens, skipping '#' comments.
class PgmReader {
 public:
  explicit PgmReader(std::istream& in) : in_(in) {}

  bool next(std::string& token) {
    while (in_ >> token) {
      if (token[0] != '#') return true;
      std::string rest;
      std::getline(in_, rest);
    }
    return false;
  }

  int next_int(const std::string& what) {
    std::string t;
    if (!next(t)) throw FormatError("pgm: missing " + what);
    try {
      std::size_t used = 0;
      const int v = std::stoi(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw FormatError("pgm: bad " + what + " '" + t + "'");
    }
  }

 private:
  std::istream& in_;
};

}  // namespace

WorldCostmap load_costmap(const std::filesystem::path& pgm_path,
                          const std::filesystem::path& meta_path) {
  const auto meta_file = meta_path.empty() ? sidecar_path(pgm_path) : meta_path;
  YAML::Node meta;
  try {
    meta = YAML::LoadFile(meta_file.string());
  } catch (const YAML::BadFile&) {
    throw std::runtime_error("cannot open " + meta_file.string());
  } catch (const YAML::Exception& e) {
    throw FormatError("costmap metadata " + meta_file.string() + ": " + e.what());
  }
  double resolution, ox, oy;
  int unknown_value = 255;
  try {
    resolution = meta["resolution"].as<double>();
    ox = meta["origin"][0].as<double>();
    oy = meta["origin"][1].as<double>();
    if (meta["unknown_value"]) unknown_value = meta["unknown_value"].as<int>();
  } catch (const YAML::Exception& e) {
    throw FormatError("costmap metadata " + meta_file.string() + ": " + e.what());
  }

  std::ifstream in(pgm_path);
  if (!in) throw std::runtime_error("cannot open " + pgm_path.string());
  PgmReader reader(in);
  std::string magic;
  if (!reader.next(magic) || magic != "P2") throw FormatError("pgm: expected P2 magic in " + pgm_path.string());
  const int width = reader.next_int("width");
  const int height = reader.next_int("height");
  const int maxval = reader.next_int("maxval");
  if (width <= 0 || height <= 0 || maxval <= 0) throw FormatError("pgm: bad header in " + pgm_path.string());

  WorldCostmap world(height, width, resolution, ox, oy, kUnknownCost);
  for (int r = height - 1; r >= 0; --r) {
    for (int c = 0; c < width; ++c) {
      const int v = reader.next_int("pixel");
      if (v == unknown_value) continue;
      if (v < 0 || v > kLethalCost) {
        throw FormatError("pgm: pixel value " + std::to_string(v) + " outside 0..100 in " + pgm_path.string());
      }
      world.set({r, c}, v);
    }
  }
  return world;
}

WorldCostmap convert_layer(const GridMap& traversability, const CostmapConfig& cfg) {
  WorldCostmap world(traversability.rows(), traversability.cols(), traversability.resolution(),
                     traversability.origin_x(), traversability.origin_y(), kUnknownCost);
  const auto& t = traversability.layer(Layer::Traversability);
  for (std::size_t k = 0; k < t.size(); ++k) {
    world.set(traversability.index_of(k), traversability_to_cost(t[k], cfg));
  }
  return world;
}

}  // namespace terranav::costmap
