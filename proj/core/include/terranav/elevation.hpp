#pragma once

#include <cstddef>

#include "terranav/geometry.hpp"
#include "terranav/grid_map.hpp"

namespace terranav::elevation {

struct SensorNoiseModel {
  double alpha_d = 0.002;               // variance per squared meter of range
  double mahalanobis_threshold = 2.5;
  double min_range = 0.1;               // closer returns are treated as self-hits
};

struct InflationModel {
  double sigma_t_sq = 0.01;  // m^2/s
  double apply_rate = 0.1;   // Hz
};

/// Upper bound on stored variance; keeps long inflation runs finite.
inline constexpr double kVarianceCap = 1e6;

/// Tallies of one integrate_cloud call. Sanitization drops (non-finite points,
/// self-returns inside min_range) count as rejections, so
/// accepted + rejected + out_of_bounds always equals the input size.
struct UpdateStats {
  std::size_t points_accepted = 0;
  std::size_t points_rejected_outlier = 0;
  std::size_t points_out_of_bounds = 0;
  std::size_t cells_touched = 0;
};

struct Fused {
  double height;
  double variance;
};

double measurement_variance(const SensorNoiseModel& model, double distance);

/// Scalar Kalman update of one cell. Throws std::invalid_argument unless both
/// variances are positive.
Fused kalman_fuse_cell(double h_prior, double var_prior, double p_z, double var_meas);

/// Innovation gate. An unknown prior (NaN height) always accepts.
bool mahalanobis_accept(double h_prior, double var_prior, double p_z, double var_meas,
                        double threshold);

/// Fuses a map-frame cloud into the elevation and variance layers. Cells that
/// receive an accepted point get `stamp` in the time layer and, when `dirty`
/// is given, are recorded there.
UpdateStats integrate_cloud(GridMap& map, const PointCloud& cloud, const Point3& sensor_origin,
                            const SensorNoiseModel& model, double stamp = 0.0,
                            CellSet* dirty = nullptr);

/// Adds sigma_t_sq * dt to every known cell's variance. Returns the number of
/// cells inflated.
std::size_t inflate_variance(GridMap& map, double dt, const InflationModel& model);

}  // namespace terranav::elevation
