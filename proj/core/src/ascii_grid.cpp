#include "terranav/ascii_grid.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace terranav {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_number(const std::string& token, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw FormatError("ascii grid: bad " + what + " value '" + token + "'");
  }
}

}  // namespace

AsciiGrid read_ascii_grid(std::istream& in) {
  AsciiGrid g;
  bool has[6] = {};
  const char* keys[6] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"};
  for (int i = 0; i < 6; ++i) {
    std::string key, value;
    if (!(in >> key >> value)) throw FormatError("ascii grid: truncated header");
    key = lower(key);
    const auto* it = std::find_if(std::begin(keys), std::end(keys),
                                  [&](const char* k) { return key == k; });
    if (it == std::end(keys)) throw FormatError("ascii grid: unexpected header key '" + key + "'");
    const auto slot = static_cast<std::size_t>(it - std::begin(keys));
    if (has[slot]) throw FormatError("ascii grid: duplicate header key '" + key + "'");
    has[slot] = true;
    const double v = parse_number(value, key);
    switch (slot) {
      case 0: g.ncols = static_cast<int>(v); break;
      case 1: g.nrows = static_cast<int>(v); break;
      case 2: g.xllcorner = v; break;
      case 3: g.yllcorner = v; break;
      case 4: g.cellsize = v; break;
      case 5: g.nodata_value = v; break;
    }
  }
  if (g.ncols <= 0 || g.nrows <= 0) throw FormatError("ascii grid: non-positive dimensions");
  if (!(g.cellsize > 0.0)) throw FormatError("ascii grid: non-positive cellsize");

  const auto n = static_cast<std::size_t>(g.ncols) * g.nrows;
  g.values.assign(n, kUnknown);
  std::string token;
  for (int file_row = 0; file_row < g.nrows; ++file_row) {
    const int row = g.nrows - 1 - file_row;
    for (int col = 0; col < g.ncols; ++col) {
      if (!(in >> token)) throw FormatError("ascii grid: expected " + std::to_string(n) + " values");
      const double v = parse_number(token, "cell");
      g.values[static_cast<std::size_t>(row) * g.ncols + col] = (v == g.nodata_value) ? kUnknown : v;
    }
  }
  if (in >> token) throw FormatError("ascii grid: trailing data after " + std::to_string(n) + " values");
  return g;
}

AsciiGrid read_ascii_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_ascii_grid(in);
}

void write_ascii_grid(std::ostream& out, const AsciiGrid& g) {
  out << "ncols " << g.ncols << "\n"
      << "nrows " << g.nrows << "\n"
      << std::setprecision(17) << "xllcorner " << g.xllcorner << "\n"
      << "yllcorner " << g.yllcorner << "\n"
      << "cellsize " << g.cellsize << "\n"
      << "nodata_value " << g.nodata_value << "\n";
  for (int file_row = 0; file_row < g.nrows; ++file_row) {
    const int row = g.nrows - 1 - file_row;
    for (int col = 0; col < g.ncols; ++col) {
      const double v = g.at(row, col);
      if (col) out << ' ';
      out << (is_unknown(v) ? g.nodata_value : v);
    }
    out << '\n';
  }
}

void write_ascii_grid(const std::filesystem::path& path, const AsciiGrid& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_ascii_grid(out, grid);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

AsciiGrid export_layer(const GridMap& map, Layer layer) {
  AsciiGrid g;
  g.ncols = map.cols();
  g.nrows = map.rows();
  g.xllcorner = map.origin_x();
  g.yllcorner = map.origin_y();
  g.cellsize = map.resolution();
  g.values = map.layer(layer);
  return g;
}

GridMap import_layer(const AsciiGrid& grid, Layer layer) {
  GridGeometry geo;
  geo.resolution = grid.cellsize;
  geo.size_x = grid.ncols * grid.cellsize;
  geo.size_y = grid.nrows * grid.cellsize;
  geo.origin_x = grid.xllcorner;
  geo.origin_y = grid.yllcorner;
  GridMap map(geo);
  if (map.rows() != grid.nrows || map.cols() != grid.ncols) {
    throw FormatError("ascii grid: inconsistent geometry");
  }
  map.layer(layer) = grid.values;
  return map;
}

}  // namespace terranav
