#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "terranav/geometry.hpp"
#include "terranav/grid_map.hpp"

namespace terranav::costmap {

inline constexpr int kUnknownCost = -1;
inline constexpr int kLethalCost = 100;

struct CostmapConfig {
  double t_high = 0.85;
  double t_crit = 0.6;
  double size_x = 100.0;  // m
  double size_y = 100.0;
  double resolution = 0.1;
  double origin_x = -50.0;
  double origin_y = -50.0;
  int init_cost = 50;
  double crop_extent = 6.0;   // m, square centered on the robot
  double edge_buffer = 1.0;   // m trimmed inside the clamped crop
  int warmup_messages = 20;
  double publish_rate = 2.0;  // Hz

  void validate() const;
};

/// Piecewise traversability -> cost mapping; NaN or negative T gives -1.
int traversability_to_cost(double t, const CostmapConfig& cfg = {});

/// Persistent fixed-origin cost grid. Cells hold -1 (unknown) or 0..100.
class WorldCostmap {
 public:
  explicit WorldCostmap(const CostmapConfig& cfg = {});
  WorldCostmap(int rows, int cols, double resolution, double origin_x, double origin_y,
               int fill = kUnknownCost);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double resolution() const { return resolution_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  std::uint64_t update_count() const { return update_count_; }
  std::uint64_t& update_count() { return update_count_; }

  bool contains(CellIndex idx) const {
    return idx.row >= 0 && idx.row < rows_ && idx.col >= 0 && idx.col < cols_;
  }
  std::optional<CellIndex> world_to_cell(double x, double y) const;
  std::array<double, 2> cell_center(CellIndex idx) const;

  int at(CellIndex idx) const { return cells_[offset(idx)]; }
  void set(CellIndex idx, int cost);
  /// Cost at a world point; nullopt outside the map.
  std::optional<int> cost_at(double x, double y) const;

  const std::vector<std::int8_t>& cells() const { return cells_; }
  std::size_t offset(CellIndex idx) const {
    return static_cast<std::size_t>(idx.row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(idx.col);
  }

  bool operator==(const WorldCostmap&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  double resolution_ = 0.1;
  double origin_x_ = 0.0;
  double origin_y_ = 0.0;
  std::uint64_t update_count_ = 0;
  std::vector<std::int8_t> cells_;
};

struct ApplyStats {
  std::size_t cells_updated = 0;
  bool warmup = false;
  bool outside_world = false;  // the crop window missed the world entirely
};

/// Axis-aligned window in world meters.
struct Window {
  double x_min, y_min, x_max, y_max;
};

/// Crop square around the robot, clamped to the local map extent, then shrunk
/// by the edge buffer.
Window update_window(const GridMap& local, const Pose2D& robot, const CostmapConfig& cfg);

/// Folds one local-map snapshot into the persistent map under the warmup and
/// crop policy. Newest snapshot wins; unknown T never erases a stored cost.
ApplyStats apply_update(WorldCostmap& world, const GridMap& local, const Pose2D& robot,
                        const CostmapConfig& cfg = {});

/// Portable graymap (P2): pixel = cost, 255 for unknown. The first image row
/// is the northernmost map row. Writes `<stem>.yaml` metadata next to it.
void render_costmap(const WorldCostmap& world, const std::filesystem::path& pgm_path);

/// Reads a P2 graymap written by render_costmap plus its metadata sidecar.
/// When `meta_path` is empty the sidecar is looked up next to the image.
WorldCostmap load_costmap(const std::filesystem::path& pgm_path,
                          const std::filesystem::path& meta_path = {});

std::filesystem::path sidecar_path(const std::filesystem::path& pgm_path);

/// Whole-grid conversion used for offline work: every cell of the layer goes
/// through traversability_to_cost, no crop and no warmup.
WorldCostmap convert_layer(const GridMap& traversability, const CostmapConfig& cfg = {});

}  // namespace terranav::costmap
