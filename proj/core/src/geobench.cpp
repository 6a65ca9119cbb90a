#include "terranav/geobench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace terranav::geobench {

namespace {

struct Tri {
  int a, b, c;
  double cx, cy, r2;
};

double orient(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

Tri make_tri(const std::vector<std::array<double, 2>>& p, int a, int b, int c) {
  // Counter-clockwise order.
  if (orient(p[a][0], p[a][1], p[b][0], p[b][1], p[c][0], p[c][1]) < 0) std::swap(b, c);
  const double ax = p[a][0], ay = p[a][1];
  const double bx = p[b][0] - ax, by = p[b][1] - ay;
  const double cx = p[c][0] - ax, cy = p[c][1] - ay;
  const double d = 2.0 * (bx * cy - by * cx);
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / d, uy = (bx * c2 - cx * b2) / d;
  return {a, b, c, ax + ux, ay + uy, ux * ux + uy * uy};
}

}  // namespace

TriangleMesh delaunay_2_5d(const PointCloud& cloud) {
  TriangleMesh mesh;
  std::map<std::pair<double, double>, int> seen;
  for (const auto& q : cloud.points) {
    if (!std::isfinite(q.x) || !std::isfinite(q.y) || !std::isfinite(q.z)) continue;
    if (seen.emplace(std::make_pair(q.x, q.y), static_cast<int>(mesh.vertices.size())).second) {
      mesh.vertices.push_back(q);
    }
  }
  const int n = static_cast<int>(mesh.vertices.size());
  if (n < 3) throw GeometryError("delaunay: need at least 3 distinct points");

  double min_x = mesh.vertices[0].x, max_x = min_x, min_y = mesh.vertices[0].y, max_y = min_y;
  for (const auto& v : mesh.vertices) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  const double span = std::max(max_x - min_x, max_y - min_y);
  bool collinear = true;
  {
    const auto& a = mesh.vertices[0];
    const auto& b = mesh.vertices[1];
    for (int i = 2; i < n && collinear; ++i) {
      const auto& c = mesh.vertices[i];
      if (std::abs(orient(a.x, a.y, b.x, b.y, c.x, c.y)) > 1e-12 * span * span) collinear = false;
    }
  }
  if (collinear) throw GeometryError("delaunay: input points are collinear");

  std::vector<std::array<double, 2>> pts;
  pts.reserve(n + 3);
  for (const auto& v : mesh.vertices) pts.push_back({v.x, v.y});
  const double mx = 0.5 * (min_x + max_x), my = 0.5 * (min_y + max_y), big = 100.0 * span;
  pts.push_back({mx - 2.0 * big, my - big});
  pts.push_back({mx + 2.0 * big, my - big});
  pts.push_back({mx, my + 2.0 * big});

  std::vector<Tri> tris{make_tri(pts, n, n + 1, n + 2)};
  std::vector<std::array<int, 2>> boundary;
  for (int i = 0; i < n; ++i) {
    const double px = pts[i][0], py = pts[i][1];
    boundary.clear();
    std::vector<Tri> keep;
    keep.reserve(tris.size() + 2);
    std::vector<std::array<int, 2>> edges;
    for (const Tri& t : tris) {
      const double dx = px - t.cx, dy = py - t.cy;
      if (dx * dx + dy * dy < t.r2 * (1.0 - 1e-12)) {
        edges.push_back({t.a, t.b});
        edges.push_back({t.b, t.c});
        edges.push_back({t.c, t.a});
      } else {
        keep.push_back(t);
      }
    }
    // Cavity boundary: edges not shared by two removed triangles.
    for (std::size_t e = 0; e < edges.size(); ++e) {
      bool shared = false;
      for (std::size_t f = 0; f < edges.size() && !shared; ++f) {
        shared = f != e && edges[f][0] == edges[e][1] && edges[f][1] == edges[e][0];
      }
      if (!shared) boundary.push_back(edges[e]);
    }
    for (const auto& e : boundary) {
      if (std::abs(orient(pts[e[0]][0], pts[e[0]][1], pts[e[1]][0], pts[e[1]][1], px, py)) == 0.0) continue;
      keep.push_back(make_tri(pts, e[0], e[1], i));
    }
    tris = std::move(keep);
  }

  for (const Tri& t : tris) {
    if (t.a >= n || t.b >= n || t.c >= n) continue;
    const double area = orient(pts[t.a][0], pts[t.a][1], pts[t.b][0], pts[t.b][1], pts[t.c][0], pts[t.c][1]);
    if (std::abs(area) <= 1e-14 * span * span) continue;
    mesh.triangles.push_back({t.a, t.b, t.c});
  }
  std::sort(mesh.triangles.begin(), mesh.triangles.end());
  return mesh;
}

Point3 closest_point_on_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c) {
  const auto sub = [](const Point3& u, const Point3& v) { return Point3{u.x - v.x, u.y - v.y, u.z - v.z}; };
  const auto dot = [](const Point3& u, const Point3& v) { return u.x * v.x + u.y * v.y + u.z * v.z; };
  const auto at = [&](double v, double w) {
    return Point3{a.x + v * (b.x - a.x) + w * (c.x - a.x), a.y + v * (b.y - a.y) + w * (c.y - a.y),
                  a.z + v * (b.z - a.z) + w * (c.z - a.z)};
  };
  const Point3 ab = sub(b, a), ac = sub(c, a), ap = sub(p, a);
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Point3 bp = sub(p, b);
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return at(d1 / (d1 - d3), 0.0);
  const Point3 cp = sub(p, c);
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return at(0.0, d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {b.x + w * (c.x - b.x), b.y + w * (c.y - b.y), b.z + w * (c.z - b.z)};
  }
  const double denom = 1.0 / (va + vb + vc);
  return at(vb * denom, vc * denom);
}

double point_to_mesh_distance(const Point3& p, const TriangleMesh& mesh) {
  if (mesh.triangles.empty()) throw GeometryError("point_to_mesh_distance: empty mesh");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : mesh.triangles) {
    const Point3 q = closest_point_on_triangle(p, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    best = std::min(best, distance(p, q));
  }
  return best;
}

MeshIndex::MeshIndex(const TriangleMesh& mesh) : mesh_(mesh) {
  if (mesh.triangles.empty()) throw GeometryError("mesh index: empty mesh");
  double x1 = -std::numeric_limits<double>::infinity(), y1 = x1;
  x0_ = y0_ = std::numeric_limits<double>::infinity();
  for (const auto& v : mesh.vertices) {
    x0_ = std::min(x0_, v.x);
    y0_ = std::min(y0_, v.y);
    x1 = std::max(x1, v.x);
    y1 = std::max(y1, v.y);
  }
  const double area = std::max((x1 - x0_) * (y1 - y0_), 1e-12);
  cell_ = std::max(std::sqrt(area / static_cast<double>(mesh.triangles.size())), 1e-9);
  nx_ = std::max(1, static_cast<int>(std::ceil((x1 - x0_) / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((y1 - y0_) / cell_)));
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    double lx = std::numeric_limits<double>::infinity(), ly = lx, hx = -lx, hy = -lx;
    for (int k : mesh.triangles[t]) {
      lx = std::min(lx, mesh.vertices[k].x);
      ly = std::min(ly, mesh.vertices[k].y);
      hx = std::max(hx, mesh.vertices[k].x);
      hy = std::max(hy, mesh.vertices[k].y);
    }
    const int i0 = std::clamp(static_cast<int>(std::floor((lx - x0_) / cell_)), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>(std::floor((hx - x0_) / cell_)), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>(std::floor((ly - y0_) / cell_)), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>(std::floor((hy - y0_) / cell_)), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(t);
    }
  }
}

double MeshIndex::tri_distance(int t, const Point3& p) const {
  const auto& tri = mesh_.triangles[t];
  return terranav::distance(p, closest_point_on_triangle(p, mesh_.vertices[tri[0]], mesh_.vertices[tri[1]],
                                                         mesh_.vertices[tri[2]]));
}

double MeshIndex::brute(const Point3& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) best = std::min(best, tri_distance(t, p));
  return best;
}

double MeshIndex::distance(const Point3& p) const {
  const double u = (p.x - x0_) / cell_, v = (p.y - y0_) / cell_;
  if (!(u >= 0.0 && v >= 0.0 && u <= nx_ && v <= ny_)) return brute(p);
  const int ci = std::min(static_cast<int>(u), nx_ - 1), cj = std::min(static_cast<int>(v), ny_ - 1);
  double best = std::numeric_limits<double>::infinity();
  const int rings = std::max(nx_, ny_);
  for (int k = 0; k <= rings; ++k) {
    for (int j = cj - k; j <= cj + k; ++j) {
      if (j < 0 || j >= ny_) continue;
      for (int i = ci - k; i <= ci + k; ++i) {
        if (i < 0 || i >= nx_) continue;
        if (std::max(std::abs(i - ci), std::abs(j - cj)) != k) continue;
        for (int t : buckets_[static_cast<std::size_t>(j) * nx_ + i]) best = std::min(best, tri_distance(t, p));
      }
    }
    // Anything unseen lies outside the (2k+1)^2 block around the query cell.
    const double bound = std::min({u - (ci - k), (ci + k + 1) - u, v - (cj - k), (cj + k + 1) - v}) * cell_;
    if (best <= bound) break;
  }
  return best;
}

DeviationStats cloud_to_mesh_stats(const PointCloud& cloud, const TriangleMesh& mesh, double bucket_width_cm) {
  if (cloud.empty()) throw GeometryError("cloud_to_mesh_stats: empty cloud");
  if (!(bucket_width_cm > 0.0)) throw std::invalid_argument("cloud_to_mesh_stats: bucket width must be positive");
  const MeshIndex index(mesh);
  std::vector<double> d;
  d.reserve(cloud.size());
  for (const auto& p : cloud.points) d.push_back(index.distance(p) * 100.0);

  DeviationStats s;
  s.count = d.size();
  s.bucket_width = bucket_width_cm;
  s.mean = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
  double ss = 0.0;
  for (double x : d) {
    ss += (x - s.mean) * (x - s.mean);
    s.max = std::max(s.max, x);
  }
  s.std_dev = std::sqrt(ss / d.size());
  s.histogram.assign(static_cast<std::size_t>(std::floor(s.max / bucket_width_cm)) + 1, 0);
  for (double x : d) ++s.histogram[static_cast<std::size_t>(std::floor(x / bucket_width_cm))];
  return s;
}

void write_stats_csv(std::ostream& out, const DeviationStats& s) {
  out << std::setprecision(10) << "points,mean_cm,std_cm,max_cm\n"
      << s.count << ',' << s.mean << ',' << s.std_dev << ',' << s.max << "\n\nbucket_lo_cm,bucket_hi_cm,count\n";
  for (std::size_t i = 0; i < s.histogram.size(); ++i) {
    out << i * s.bucket_width << ',' << (i + 1) * s.bucket_width << ',' << s.histogram[i] << '\n';
  }
}

void write_stats_summary(std::ostream& out, const DeviationStats& s) {
  out << std::fixed << std::setprecision(2) << "Mean Deviation (cm) | Std. Dev. (cm) | Max Deviation (cm)\n"
      << std::setw(18) << s.mean << " | " << std::setw(14) << s.std_dev << " | " << std::setw(18) << s.max
      << "\n";
  out.unsetf(std::ios::floatfield);
}

AllanResult allan_deviation(const std::vector<double>& samples, double rate, const std::vector<double>& taus) {
  if (!(rate > 0.0)) throw std::invalid_argument("allan_deviation: rate must be positive");
  AllanResult r;
  const std::size_t n = samples.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + samples[i];
  for (double tau : taus) {
    const auto m = static_cast<std::size_t>(std::max(1.0, std::round(tau * rate)));
    if (n < 2 * m) {
      r.omitted.push_back(tau);
      continue;
    }
    const std::size_t terms = n - 2 * m + 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
      const double a = (prefix[k + m] - prefix[k]) / m;
      const double b = (prefix[k + 2 * m] - prefix[k + m]) / m;
      acc += (b - a) * (b - a);
    }
    r.curve.push_back({m / rate, std::sqrt(acc / (2.0 * terms)), n / m});
  }
  return r;
}

std::vector<double> log_spaced_taus(std::size_t n, double rate, int per_decade) {
  std::vector<double> taus;
  std::size_t last = 0;
  for (int k = 0;; ++k) {
    const auto m = static_cast<std::size_t>(std::round(std::pow(10.0, static_cast<double>(k) / per_decade)));
    if (m > n / 4) break;
    if (m != last) taus.push_back(m / rate);
    last = m;
  }
  return taus;
}

double loglog_slope(const std::vector<AllanPoint>& curve, double tau_lo, double tau_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (const auto& p : curve) {
    if (p.tau < tau_lo || p.tau > tau_hi || !(p.deviation > 0.0)) continue;
    const double x = std::log10(p.tau), y = std::log10(p.deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  if (k < 2) throw std::invalid_argument("loglog_slope: need two points in range");
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

void write_allan_csv(std::ostream& out, const AllanResult& r) {
  out << std::setprecision(10) << "tau_s,deviation,clusters\n";
  for (const auto& p : r.curve) out << p.tau << ',' << p.deviation << ',' << p.clusters << '\n';
}

PointCloud read_xyz(std::istream& in) {
  PointCloud cloud;
  cloud.frame = Frame::Map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Point3 p;
    if (!(ls >> p.x >> p.y >> p.z)) throw std::runtime_error("xyz: malformed row at line " + std::to_string(lineno));
    cloud.points.push_back(p);
  }
  return cloud;
}

PointCloud read_xyz(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_xyz(in);
}

void write_xyz(std::ostream& out, const PointCloud& cloud) {
  out << std::setprecision(17);
  for (const auto& p : cloud.points) out << p.x << ' ' << p.y << ' ' << p.z << '\n';
}

std::vector<double> read_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double v;
    if (!(ls >> v)) throw std::runtime_error("series: malformed row at line " + std::to_string(lineno));
    out.push_back(v);
  }
  return out;
}

}  // namespace terranav::geobench
