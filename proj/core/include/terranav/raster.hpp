#pragma once

#include <cmath>
#include <limits>

#include "terranav/grid_map.hpp"

namespace terranav {

struct GridFrame {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double resolution = 1.0;
};

/// Supercover walk of the segment (x0,y0)-(x1,y1) over a regular grid.
/// Calls visit(CellIndex, t_in, t_out) for every cell the segment touches, in
/// order, with [t_in, t_out] the parametric span inside that cell (0..1).
/// When the segment passes exactly through a cell corner, both side cells are
/// reported with an empty span. Indices may fall outside any particular grid;
/// the caller bounds-checks. Returning false from visit stops the walk.
template <class Visit>
void traverse_segment(const GridFrame& g, double x0, double y0, double x1, double y1, Visit&& visit) {
  const double u0 = (x0 - g.origin_x) / g.resolution, v0 = (y0 - g.origin_y) / g.resolution;
  const double u1 = (x1 - g.origin_x) / g.resolution, v1 = (y1 - g.origin_y) / g.resolution;
  int col = static_cast<int>(tolerant_floor(u0));
  int row = static_cast<int>(tolerant_floor(v0));
  const int end_col = static_cast<int>(tolerant_floor(u1));
  const int end_row = static_cast<int>(tolerant_floor(v1));
  const double du = u1 - u0, dv = v1 - v0;
  const int step_c = du > 0 ? 1 : (du < 0 ? -1 : 0);
  const int step_r = dv > 0 ? 1 : (dv < 0 ? -1 : 0);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Parametric distance to the next vertical/horizontal grid line.
  double t_max_c = kInf, t_delta_c = kInf, t_max_r = kInf, t_delta_r = kInf;
  if (step_c != 0) {
    const double boundary = step_c > 0 ? col + 1.0 : static_cast<double>(col);
    t_max_c = (boundary - u0) / du;
    t_delta_c = 1.0 / std::abs(du);
  }
  if (step_r != 0) {
    const double boundary = step_r > 0 ? row + 1.0 : static_cast<double>(row);
    t_max_r = (boundary - v0) / dv;
    t_delta_r = 1.0 / std::abs(dv);
  }

  double t = 0.0;
  constexpr double kTie = 1e-12;
  while (true) {
    const bool at_end = (col == end_col && row == end_row);
    const double t_next = std::min({t_max_c, t_max_r, 1.0});
    if (at_end || t_next >= 1.0) {
      visit(CellIndex{row, col}, t, 1.0);
      return;
    }
    if (!visit(CellIndex{row, col}, t, t_next)) return;
    if (std::abs(t_max_c - t_max_r) <= kTie) {
      // Corner crossing: report both side cells, then move diagonally.
      if (!visit(CellIndex{row, col + step_c}, t_next, t_next)) return;
      if (!visit(CellIndex{row + step_r, col}, t_next, t_next)) return;
      col += step_c;
      row += step_r;
      t_max_c += t_delta_c;
      t_max_r += t_delta_r;
    } else if (t_max_c < t_max_r) {
      col += step_c;
      t_max_c += t_delta_c;
    } else {
      row += step_r;
      t_max_r += t_delta_r;
    }
    t = t_next;
  }
}

}  // namespace terranav
