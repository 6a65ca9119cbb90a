#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "terranav/geometry.hpp"

namespace terranav::geobench {

struct TriangleMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Delaunay triangulation of the x-y projection with z carried along.
/// Duplicate x-y positions keep their first occurrence. Throws GeometryError
/// for fewer than 3 distinct points or collinear input.
TriangleMesh delaunay_2_5d(const PointCloud& cloud);

/// Closest point on triangle abc to p.
Point3 closest_point_on_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c);

double point_to_mesh_distance(const Point3& p, const TriangleMesh& mesh);

/// Uniform x-y bucket index over triangle bounds for repeated queries.
class MeshIndex {
 public:
  explicit MeshIndex(const TriangleMesh& mesh);
  double distance(const Point3& p) const;

 private:
  double brute(const Point3& p) const;
  double tri_distance(int t, const Point3& p) const;

  const TriangleMesh& mesh_;
  double x0_ = 0.0, y0_ = 0.0, cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

struct DeviationStats {
  double mean = 0.0;     // cm
  double std_dev = 0.0;  // cm
  double max = 0.0;      // cm
  double bucket_width = 0.5;  // cm
  std::vector<std::size_t> histogram;
  std::size_t count = 0;
};

DeviationStats cloud_to_mesh_stats(const PointCloud& cloud, const TriangleMesh& mesh,
                                   double bucket_width_cm = 0.5);

void write_stats_csv(std::ostream& out, const DeviationStats& s);
void write_stats_summary(std::ostream& out, const DeviationStats& s);

struct AllanPoint {
  double tau = 0.0;  // s
  double deviation = 0.0;
  std::size_t clusters = 0;
};

struct AllanResult {
  std::vector<AllanPoint> curve;
  std::vector<double> omitted;  // requested taus with fewer than two clusters
};

/// Overlapping Allan deviation. Each tau is rounded to a whole number of
/// samples (at least one).
AllanResult allan_deviation(const std::vector<double>& samples, double rate, const std::vector<double>& taus);

/// Log-spaced taus from one sample period up to a quarter of the series.
std::vector<double> log_spaced_taus(std::size_t n, double rate, int per_decade = 10);

/// Least-squares slope of log10(deviation) against log10(tau).
double loglog_slope(const std::vector<AllanPoint>& curve, double tau_lo, double tau_hi);

void write_allan_csv(std::ostream& out, const AllanResult& r);

/// Whitespace separated "x y z" rows; blank lines and '#' comments skipped.
PointCloud read_xyz(std::istream& in);
PointCloud read_xyz(const std::filesystem::path& path);
void write_xyz(std::ostream& out, const PointCloud& cloud);

/// One sample per line (first column).
std::vector<double> read_series(const std::filesystem::path& path);

}  // namespace terranav::geobench
