#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "terranav/grid_map.hpp"

namespace terranav::traversability {

struct PatchSpec {
  int side = 48;  // cells; even
};

/// Square height window centered on one cell, re-centered on that cell's height.
/// Row-major with row 0 at the lowest map row.
struct Patch {
  int side = 0;
  double resolution = 0.0;
  std::vector<double> heights;

  double at(int row, int col) const { return heights[static_cast<std::size_t>(row) * side + col]; }
};

/// Window rows [i - side/2, i + side/2 - 1] (same for columns). Returns nullopt
/// when the center lacks a side/2 margin to every border or any window cell is
/// unknown.
std::optional<Patch> extract_patch(const GridMap& map, CellIndex center, const PatchSpec& spec = {});

/// Anything that maps an elevation patch to a traversability score in [0, 1].
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual double estimate(const Patch& patch) const = 0;
};

struct FallbackParams {
  double max_slope = 0.5;       // plane gradient magnitude (rise over run)
  double max_roughness = 0.05;  // m, RMS residual from the fitted plane
  double max_step = 0.15;       // m, largest detrended jump between 4-neighbors
};

struct PatchGeometry {
  double slope = 0.0;
  double roughness = 0.0;
  double step = 0.0;
};

/// Least-squares plane fit of the patch. `step` is measured on the plane
/// residuals, so a clean ramp has zero step.
PatchGeometry analyze_patch(const Patch& patch);

double fallback_traversability(const Patch& patch, const FallbackParams& params);

class GeometricEstimator final : public Estimator {
 public:
  explicit GeometricEstimator(FallbackParams params = {}) : params_(params) {}
  double estimate(const Patch& patch) const override;
  const FallbackParams& params() const { return params_; }

 private:
  FallbackParams params_;
};

/// Writes T for every dirty cell: the estimate when a full patch exists,
/// unknown otherwise. Returns the number of estimator evaluations.
std::size_t fill_traversability_layer(GridMap& map, const Estimator& estimator,
                                      std::span<const CellIndex> dirty,
                                      const PatchSpec& spec = {});

}  // namespace terranav::traversability
