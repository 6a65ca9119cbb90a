#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "terranav/grid_map.hpp"

namespace terranav {

/// ESRI-style ASCII grid. Values are stored with row 0 at the bottom (south)
/// to match GridMap; on disk the northernmost row comes first.
struct AsciiGrid {
  int ncols = 0;
  int nrows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 1.0;
  double nodata_value = -9999.0;
  std::vector<double> values;  // row-major, unknown cells hold kUnknown

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * ncols + col]; }
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

AsciiGrid read_ascii_grid(std::istream& in);
AsciiGrid read_ascii_grid(const std::filesystem::path& path);
void write_ascii_grid(std::ostream& out, const AsciiGrid& grid);
void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& grid);

AsciiGrid export_layer(const GridMap& map, Layer layer);
/// Builds a map whose geometry matches the grid and whose `layer` holds its
/// values; other layers are unknown.
GridMap import_layer(const AsciiGrid& grid, Layer layer);

}  // namespace terranav
