#include "terranav/traversability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace terranav::traversability {

std::optional<Patch> extract_patch(const GridMap& map, CellIndex center, const PatchSpec& spec) {
  if (spec.side <= 0 || spec.side % 2 != 0) throw std::invalid_argument("patch side must be even");
  const int half = spec.side / 2;
  if (center.row < half || center.col < half || center.row + half >= map.rows() ||
      center.col + half >= map.cols()) {
    return std::nullopt;
  }
  const double h0 = map.at(Layer::Elevation, center);
  if (is_unknown(h0)) return std::nullopt;

  Patch patch;
  patch.side = spec.side;
  patch.resolution = map.resolution();
  patch.heights.resize(static_cast<std::size_t>(spec.side) * spec.side);
  const auto& height = map.layer(Layer::Elevation);
  for (int r = 0; r < spec.side; ++r) {
    const std::size_t base = map.offset({center.row - half + r, center.col - half});
    for (int c = 0; c < spec.side; ++c) {
      const double h = height[base + c];
      if (is_unknown(h)) return std::nullopt;
      patch.heights[static_cast<std::size_t>(r) * spec.side + c] = h - h0;
    }
  }
  return patch;
}

PatchGeometry analyze_patch(const Patch& patch) {
  const int n = patch.side;
  if (n < 2 || patch.heights.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("analyze_patch: malformed patch");
  }
  // Centered coordinates; the normal equations decouple.
  const double mid = 0.5 * (n - 1);
  double sum_z = 0.0, sum_xz = 0.0, sum_yz = 0.0, sum_xx = 0.0;
  for (int r = 0; r < n; ++r) {
    const double y = r - mid;
    for (int c = 0; c < n; ++c) {
      const double x = c - mid;
      const double z = patch.at(r, c);
      sum_z += z;
      sum_xz += x * z;
      sum_yz += y * z;
      sum_xx += x * x;
    }
  }
  const double count = static_cast<double>(n) * n;
  const double mean = sum_z / count;
  const double gx = sum_xz / sum_xx;  // per cell; sum_yy == sum_xx
  const double gy = sum_yz / sum_xx;

  std::vector<double> residual(patch.heights.size());
  double ss = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double e = patch.at(r, c) - (mean + gx * (c - mid) + gy * (r - mid));
      residual[static_cast<std::size_t>(r) * n + c] = e;
      ss += e * e;
    }
  }
  double step = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double e = residual[static_cast<std::size_t>(r) * n + c];
      if (c + 1 < n) step = std::max(step, std::abs(residual[static_cast<std::size_t>(r) * n + c + 1] - e));
      if (r + 1 < n) step = std::max(step, std::abs(residual[static_cast<std::size_t>(r + 1) * n + c] - e));
    }
  }
  PatchGeometry g;
  g.slope = std::hypot(gx, gy) / patch.resolution;
  g.roughness = std::sqrt(ss / count);
  g.step = step;
  return g;
}

namespace {
double factor(double value, double limit) { return std::clamp(1.0 - value / limit, 0.0, 1.0); }
}  // namespace

double fallback_traversability(const Patch& patch, const FallbackParams& params) {
  if (!(params.max_slope > 0.0 && params.max_roughness > 0.0 && params.max_step > 0.0)) {
    throw std::invalid_argument("fallback limits must be positive");
  }
  const PatchGeometry g = analyze_patch(patch);
  return factor(g.slope, params.max_slope) * factor(g.roughness, params.max_roughness) *
         factor(g.step, params.max_step);
}

double GeometricEstimator::estimate(const Patch& patch) const {
  return fallback_traversability(patch, params_);
}

std::size_t fill_traversability_layer(GridMap& map, const Estimator& estimator,
                                      std::span<const CellIndex> dirty, const PatchSpec& spec) {
  std::size_t evaluated = 0;
  for (const CellIndex& idx : dirty) {
    if (!map.contains(idx)) continue;
    auto patch = extract_patch(map, idx, spec);
    if (!patch) {
      map.at(Layer::Traversability, idx) = kUnknown;
      continue;
    }
    map.at(Layer::Traversability, idx) = std::clamp(estimator.estimate(*patch), 0.0, 1.0);
    ++evaluated;
  }
  return evaluated;
}

}  // namespace terranav::traversability
