#include "terranav/elevation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace terranav::elevation {

double measurement_variance(const SensorNoiseModel& model, double distance) {
  return model.alpha_d * distance * distance;
}

Fused kalman_fuse_cell(double h_prior, double var_prior, double p_z, double var_meas) {
  if (!(var_prior > 0.0) || !(var_meas > 0.0)) {
    throw std::invalid_argument("kalman_fuse_cell: variances must be positive");
  }
  const double denom = var_meas + var_prior;
  return {(var_meas * h_prior + var_prior * p_z) / denom, var_prior * var_meas / denom};
}

bool mahalanobis_accept(double h_prior, double var_prior, double p_z, double var_meas,
                        double threshold) {
  if (is_unknown(h_prior)) return true;
  return std::abs(p_z - h_prior) / std::sqrt(var_prior + var_meas) <= threshold;
}

UpdateStats integrate_cloud(GridMap& map, const PointCloud& cloud, const Point3& sensor_origin,
                            const SensorNoiseModel& model, double stamp, CellSet* dirty) {
  UpdateStats stats;
  if (cloud.points.empty()) return stats;

  auto& height = map.layer(Layer::Elevation);
  auto& variance = map.layer(Layer::Variance);
  auto& time = map.layer(Layer::Time);
  std::vector<unsigned char> touched(height.size(), 0);

  for (const auto& p : cloud.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      ++stats.points_rejected_outlier;
      continue;
    }
    const auto idx = map.world_to_cell(p.x, p.y);
    if (!idx) {
      ++stats.points_out_of_bounds;
      continue;
    }
    const double d = distance(p, sensor_origin);
    if (d < model.min_range) {
      ++stats.points_rejected_outlier;
      continue;
    }
    const double var_meas = measurement_variance(model, d);
    const std::size_t k = map.offset(*idx);
    double& h = height[k];
    double& var = variance[k];

    if (is_unknown(h)) {
      h = p.z;
      var = var_meas;
    } else {
      if (!mahalanobis_accept(h, var, p.z, var_meas, model.mahalanobis_threshold)) {
        ++stats.points_rejected_outlier;
        continue;
      }
      const Fused f = kalman_fuse_cell(h, var, p.z, var_meas);
      h = f.height;
      var = f.variance;
    }
    time[k] = stamp;
    ++stats.points_accepted;
    if (!touched[k]) {
      touched[k] = 1;
      ++stats.cells_touched;
      if (dirty) dirty->insert(*idx);
    }
  }
  return stats;
}

std::size_t inflate_variance(GridMap& map, double dt, const InflationModel& model) {
  if (dt < 0.0) throw std::invalid_argument("inflate_variance: negative dt");
  const auto& height = map.layer(Layer::Elevation);
  auto& variance = map.layer(Layer::Variance);
  const double add = model.sigma_t_sq * dt;
  std::size_t n = 0;
  for (std::size_t k = 0; k < variance.size(); ++k) {
    if (is_unknown(height[k])) continue;
    variance[k] = std::min(variance[k] + add, kVarianceCap);
    ++n;
  }
  return n;
}

}  // namespace terranav::elevation
