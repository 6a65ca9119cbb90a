#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace terranav {

/// Wraps an angle into (-pi, pi].
double normalize_angle(double theta);

/// Planar robot pose. theta is kept in (-pi, pi] by every mutating helper.
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  bool operator==(const Pose2D&) const = default;
};

/// Inverse rigid transform, so that compose(p, inverse(p)) is the identity.
Pose2D inverse(const Pose2D& p);

/// a (+) b: apply b in the frame of a.
Pose2D compose(const Pose2D& a, const Pose2D& b);

struct Twist {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s

  bool operator==(const Twist&) const = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Point3&) const = default;
};

double distance(const Point3& a, const Point3& b);

enum class Frame { Sensor, Base, Map };

struct PointCloud {
  std::vector<Point3> points;
  Frame frame = Frame::Sensor;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Fixed mount of the range sensor relative to the base frame. Only the
/// translation enters map-frame math; tilt shapes the simulated ray pattern.
struct SensorMount {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double tilt = 0.0;  // rad from the inverted vertical axis
};

/// Rotates each point by pose.theta about z (after adding the mount's planar
/// offset), translates by the pose, and lifts z by the mount height.
PointCloud transform_cloud(const PointCloud& cloud, const Pose2D& pose,
                           const SensorMount& mount = {});

/// Replaces every occupied voxel by the centroid of its points. Output keeps
/// the order in which voxels were first seen.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel);

/// Drops points with non-finite coordinates.
PointCloud sanitize(const PointCloud& cloud);

}  // namespace terranav
