#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "terranav/geometry.hpp"

namespace terranav {

/// Marker for unobserved values in every layer.
inline constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

inline bool is_unknown(double v) { return std::isnan(v); }

/// Row index grows with +y, column index with +x.
struct CellIndex {
  int row = 0;
  int col = 0;

  bool operator==(const CellIndex&) const = default;
};

enum class Layer : int { Elevation = 0, Variance, Traversability, Time };

inline constexpr std::size_t kLayerCount = 4;

std::string_view layer_name(Layer layer);
std::optional<Layer> layer_from_name(std::string_view name);

struct GridGeometry {
  double size_x = 5.0;      // m
  double size_y = 5.0;      // m
  double resolution = 0.04; // m/cell
  double origin_x = 0.0;    // world x of the lower-left corner of cell (0,0)
  double origin_y = 0.0;
};

/// World-axis-aligned multi-layer 2.5D grid. All layers share one shape; the
/// grid follows the robot by shifting whole cells (see recenter()).
class GridMap {
 public:
  explicit GridMap(const GridGeometry& geometry = {});

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double resolution() const { return resolution_; }
  double origin_x() const { return base_x_ + shift_col_ * resolution_; }
  double origin_y() const { return base_y_ + shift_row_ * resolution_; }
  double size_x() const { return cols_ * resolution_; }
  double size_y() const { return rows_ * resolution_; }

  bool contains(CellIndex idx) const {
    return idx.row >= 0 && idx.row < rows_ && idx.col >= 0 && idx.col < cols_;
  }

  std::optional<CellIndex> world_to_cell(double x, double y) const;
  /// World coordinates of a cell's center.
  std::array<double, 2> cell_center(CellIndex idx) const;

  double at(Layer layer, CellIndex idx) const { return data_[slot(layer)][offset(idx)]; }
  double& at(Layer layer, CellIndex idx) { return data_[slot(layer)][offset(idx)]; }

  const std::vector<double>& layer(Layer layer) const { return data_[slot(layer)]; }
  std::vector<double>& layer(Layer layer) { return data_[slot(layer)]; }

  void fill(Layer layer, double value);
  void clear();

  std::size_t offset(CellIndex idx) const {
    return static_cast<std::size_t>(idx.row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(idx.col);
  }
  CellIndex index_of(std::size_t offset) const {
    return {static_cast<int>(offset / cols_), static_cast<int>(offset % cols_)};
  }

  /// Moves the grid by whole cells so that (x, y) falls into the central cell.
  /// Cells that stay covered keep their values; cells scrolled in are unknown.
  /// Returns the shift applied in cells as {d_row, d_col}.
  std::array<int, 2> recenter(double x, double y);

  /// Recenters only when (x, y) has drifted more than `margin` meters from the
  /// map center along either axis.
  bool follow(double x, double y, double margin);

  std::array<double, 2> center() const;

 private:
  static std::size_t slot(Layer layer) { return static_cast<std::size_t>(layer); }

  int rows_ = 0;
  int cols_ = 0;
  double resolution_ = 0.0;
  // Origin = base + whole-cell shift.
  double base_x_ = 0.0;
  double base_y_ = 0.0;
  long shift_col_ = 0;
  long shift_row_ = 0;
  std::array<std::vector<double>, kLayerCount> data_;
};

/// Deduplicating set of cells of one grid shape, kept in insertion order.
class CellSet {
 public:
  CellSet() = default;
  CellSet(int rows, int cols);

  bool insert(CellIndex idx);
  bool contains(CellIndex idx) const;
  void clear();
  /// Re-expresses members after GridMap::recenter returned {d_row, d_col};
  /// members that left the grid are dropped.
  void shift(int d_row, int d_col);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<CellIndex>& members() const { return members_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<unsigned char> mark_;
  std::vector<CellIndex> members_;
};

/// Cell count covering `extent` meters; tolerant to representation error of
/// extent / resolution.
int cells_for_extent(double extent, double resolution);

/// floor() that treats values within 1e-9 below an integer as that integer.
inline double tolerant_floor(double v) { return std::floor(v + 1e-9); }

}  // namespace terranav
