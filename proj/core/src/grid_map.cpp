#include "terranav/grid_map.hpp"

#include <algorithm>
#include <stdexcept>

namespace terranav {

std::string_view layer_name(Layer layer) {
  switch (layer) {
    case Layer::Elevation: return "elevation";
    case Layer::Variance: return "variance";
    case Layer::Traversability: return "traversability";
    case Layer::Time: return "time";
  }
  return "unknown";
}

std::optional<Layer> layer_from_name(std::string_view name) {
  for (Layer l : {Layer::Elevation, Layer::Variance, Layer::Traversability, Layer::Time}) {
    if (layer_name(l) == name) return l;
  }
  return std::nullopt;
}

int cells_for_extent(double extent, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
  if (!(extent > 0.0)) throw std::invalid_argument("grid extent must be positive");
  return static_cast<int>(std::ceil(extent / resolution - 1e-9));
}

GridMap::GridMap(const GridGeometry& g)
    : rows_(cells_for_extent(g.size_y, g.resolution)),
      cols_(cells_for_extent(g.size_x, g.resolution)),
      resolution_(g.resolution),
      base_x_(g.origin_x),
      base_y_(g.origin_y) {
  for (auto& layer : data_) layer.assign(static_cast<std::size_t>(rows_) * cols_, kUnknown);
}

std::optional<CellIndex> GridMap::world_to_cell(double x, double y) const {
  const double u = tolerant_floor((x - origin_x()) / resolution_);
  const double v = tolerant_floor((y - origin_y()) / resolution_);
  if (!(u >= 0.0 && u < cols_ && v >= 0.0 && v < rows_)) return std::nullopt;
  return CellIndex{static_cast<int>(v), static_cast<int>(u)};
}

std::array<double, 2> GridMap::cell_center(CellIndex idx) const {
  return {origin_x() + (idx.col + 0.5) * resolution_, origin_y() + (idx.row + 0.5) * resolution_};
}

std::array<double, 2> GridMap::center() const {
  return {origin_x() + 0.5 * cols_ * resolution_, origin_y() + 0.5 * rows_ * resolution_};
}

void GridMap::fill(Layer layer, double value) {
  std::fill(data_[slot(layer)].begin(), data_[slot(layer)].end(), value);
}

void GridMap::clear() {
  for (auto& layer : data_) std::fill(layer.begin(), layer.end(), kUnknown);
}

std::array<int, 2> GridMap::recenter(double x, double y) {
  // Target: (x, y) lands in cell (rows/2, cols/2).
  const int want_col = static_cast<int>(std::floor((x - origin_x()) / resolution_));
  const int want_row = static_cast<int>(std::floor((y - origin_y()) / resolution_));
  const int d_col = want_col - cols_ / 2;
  const int d_row = want_row - rows_ / 2;
  if (d_col == 0 && d_row == 0) return {0, 0};

  for (auto& layer : data_) {
    std::vector<double> shifted(layer.size(), kUnknown);
    for (int r = 0; r < rows_; ++r) {
      const int src_r = r + d_row;
      if (src_r < 0 || src_r >= rows_) continue;
      for (int c = 0; c < cols_; ++c) {
        const int src_c = c + d_col;
        if (src_c < 0 || src_c >= cols_) continue;
        shifted[offset({r, c})] = layer[offset({src_r, src_c})];
      }
    }
    layer = std::move(shifted);
  }
  shift_col_ += d_col;
  shift_row_ += d_row;
  return {d_row, d_col};
}

bool GridMap::follow(double x, double y, double margin) {
  const auto c = center();
  if (std::abs(x - c[0]) <= margin && std::abs(y - c[1]) <= margin) return false;
  const auto shift = recenter(x, y);
  return shift[0] != 0 || shift[1] != 0;
}

CellSet::CellSet(int rows, int cols)
    : rows_(rows), cols_(cols), mark_(static_cast<std::size_t>(rows) * cols, 0) {}

bool CellSet::insert(CellIndex idx) {
  if (idx.row < 0 || idx.row >= rows_ || idx.col < 0 || idx.col >= cols_) return false;
  auto& m = mark_[static_cast<std::size_t>(idx.row) * cols_ + idx.col];
  if (m) return false;
  m = 1;
  members_.push_back(idx);
  return true;
}

bool CellSet::contains(CellIndex idx) const {
  if (idx.row < 0 || idx.row >= rows_ || idx.col < 0 || idx.col >= cols_) return false;
  return mark_[static_cast<std::size_t>(idx.row) * cols_ + idx.col] != 0;
}

void CellSet::clear() {
  for (const auto& c : members_) mark_[static_cast<std::size_t>(c.row) * cols_ + c.col] = 0;
  members_.clear();
}

void CellSet::shift(int d_row, int d_col) {
  if (d_row == 0 && d_col == 0) return;
  std::vector<CellIndex> old;
  old.swap(members_);
  std::fill(mark_.begin(), mark_.end(), 0);
  for (const auto& c : old) insert({c.row - d_row, c.col - d_col});
}

}  // namespace terranav
