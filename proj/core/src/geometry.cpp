#include "terranav/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace terranav {

double normalize_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::remainder(theta, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

Pose2D inverse(const Pose2D& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {-(c * p.x + s * p.y), s * p.x - c * p.y, normalize_angle(-p.theta)};
}

Pose2D compose(const Pose2D& a, const Pose2D& b) {
  const double c = std::cos(a.theta);
  const double s = std::sin(a.theta);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y,
          normalize_angle(a.theta + b.theta)};
}

double distance(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

PointCloud transform_cloud(const PointCloud& cloud, const Pose2D& pose,
                           const SensorMount& mount) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  PointCloud out;
  out.frame = Frame::Map;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    const double bx = p.x + mount.x;
    const double by = p.y + mount.y;
    out.points.push_back(
        {pose.x + c * bx - s * by, pose.y + s * bx + c * by, p.z + mount.z});
  }
  return out;
}

namespace {

struct VoxelKey {
  std::int64_t i, j, k;
  bool operator==(const VoxelKey&) const = default;
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& key) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::int64_t v : {key.i, key.j, key.k}) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

struct Accumulator {
  double x = 0.0, y = 0.0, z = 0.0;
  std::size_t n = 0;
};

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, double voxel) {
  if (!(voxel > 0.0)) throw std::invalid_argument("voxel size must be positive");

  std::unordered_map<VoxelKey, std::size_t, VoxelKeyHash> slot;
  std::vector<Accumulator> acc;
  slot.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    const VoxelKey key{static_cast<std::int64_t>(std::floor(p.x / voxel)),
                       static_cast<std::int64_t>(std::floor(p.y / voxel)),
                       static_cast<std::int64_t>(std::floor(p.z / voxel))};
    auto [it, inserted] = slot.try_emplace(key, acc.size());
    if (inserted) acc.emplace_back();
    Accumulator& a = acc[it->second];
    a.x += p.x;
    a.y += p.y;
    a.z += p.z;
    ++a.n;
  }

  PointCloud out;
  out.frame = cloud.frame;
  out.points.reserve(acc.size());
  for (const auto& a : acc) {
    if (a.n == 1) {
      out.points.push_back({a.x, a.y, a.z});
    } else {
      const double n = static_cast<double>(a.n);
      out.points.push_back({a.x / n, a.y / n, a.z / n});
    }
  }
  return out;
}

PointCloud sanitize(const PointCloud& cloud) {
  PointCloud out;
  out.frame = cloud.frame;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    if (std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z)) out.points.push_back(p);
  }
  return out;
}

}  // namespace terranav
