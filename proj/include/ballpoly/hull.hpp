#pragma once

// Brute-force convex hulls for small point sets, with coplanar facets merged
// into polygons. Cost is O(n^4); sets here have at most a few dozen points.

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "ballpoly/geom.hpp"

namespace ballpoly {

struct ConvexHull {
  int dimension = 0;
  /// Facet polygons as point indices, counterclockwise seen from outside.
  /// For a planar set there is one polygon, oriented about its plane normal.
  std::vector<std::vector<int>> facets;
  std::vector<Vec3> facet_normals;
  /// Indices of extreme points, ascending.
  std::vector<int> vertices;
  double volume = 0.0;

  bool is_vertex(int i) const { return std::binary_search(vertices.begin(), vertices.end(), i); }
};

namespace detail {

/// Strict 2D convex hull (Andrew's monotone chain), counterclockwise.
inline std::vector<int> hull_2d(const std::vector<std::pair<Eigen::Vector2d, int>>& input,
                                double eps) {
  auto pts = input;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    if (a.first.x() != b.first.x()) return a.first.x() < b.first.x();
    return a.first.y() < b.first.y();
  });
  if (pts.size() <= 2) {
    std::vector<int> out;
    for (auto& p : pts) out.push_back(p.second);
    return out;
  }
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  std::vector<std::pair<Eigen::Vector2d, int>> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2].first, h[k - 1].first, pts[i].first) <=
                         eps * (h[k - 1].first - h[k - 2].first).norm())
      --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2].first, h[k - 1].first, pts[i].first) <=
                         eps * (h[k - 1].first - h[k - 2].first).norm())
      --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  std::vector<int> out;
  for (auto& p : h) out.push_back(p.second);
  return out;
}

inline std::vector<int> planar_polygon(std::span<const Point3> pts, const std::vector<int>& idx,
                                       const Vec3& normal, double eps) {
  auto [e1, e2] = plane_basis(normal);
  std::vector<std::pair<Eigen::Vector2d, int>> proj;
  proj.reserve(idx.size());
  for (int i : idx) {
    const Vec3& p = pts[static_cast<std::size_t>(i)];
    proj.emplace_back(Eigen::Vector2d(p.dot(e1), p.dot(e2)), i);
  }
  return hull_2d(proj, eps);
}

}  // namespace detail

inline ConvexHull convex_hull(std::span<const Point3> pts, double eps = 1e-9) {
  ConvexHull hull;
  const std::size_t n = pts.size();
  if (n == 0) return hull;
  hull.dimension = affine_dimension(pts, eps);
  std::vector<int> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);

  if (hull.dimension == 0) {
    hull.vertices = {0};
    return hull;
  }
  if (hull.dimension == 1) {
    const Vec3 dir = [&] {
      for (std::size_t i = 1; i < n; ++i)
        if ((pts[i] - pts[0]).norm() > eps) return Vec3((pts[i] - pts[0]).normalized());
      return Vec3(Vec3::UnitX());
    }();
    auto [lo, hi] = std::minmax_element(all.begin(), all.end(), [&](int a, int b) {
      return pts[static_cast<std::size_t>(a)].dot(dir) < pts[static_cast<std::size_t>(b)].dot(dir);
    });
    hull.vertices = {std::min(*lo, *hi), std::max(*lo, *hi)};
    return hull;
  }
  if (hull.dimension == 2) {
    Vec3 normal = Vec3::Zero();
    for (std::size_t i = 1; i < n && normal.norm() == 0.0; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!collinear(pts[0], pts[i], pts[j], eps)) {
          normal = (pts[i] - pts[0]).cross(pts[j] - pts[0]).normalized();
          break;
        }
      }
    auto poly = detail::planar_polygon(pts, all, normal, eps);
    hull.facets.push_back(poly);
    hull.facet_normals.push_back(normal);
    hull.vertices = poly;
    std::sort(hull.vertices.begin(), hull.vertices.end());
    return hull;
  }

  std::set<std::vector<int>> seen;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (collinear(pts[i], pts[j], pts[k], eps)) continue;
        Vec3 normal = (pts[j] - pts[i]).cross(pts[k] - pts[i]).normalized();
        bool pos = false, neg = false;
        std::vector<int> on;
        for (std::size_t m = 0; m < n; ++m) {
          const double s = normal.dot(pts[m] - pts[i]);
          if (s > eps) pos = true;
          else if (s < -eps) neg = true;
          else on.push_back(static_cast<int>(m));
        }
        if (pos && neg) continue;
        if (!seen.insert(on).second) continue;
        if (pos) normal = -normal;
        auto poly = detail::planar_polygon(pts, on, normal, eps);
        hull.facets.push_back(std::move(poly));
        hull.facet_normals.push_back(normal);
      }

  std::set<int> verts;
  for (const auto& f : hull.facets) verts.insert(f.begin(), f.end());
  hull.vertices.assign(verts.begin(), verts.end());

  Vec3 centroid = Vec3::Zero();
  for (int v : hull.vertices) centroid += pts[static_cast<std::size_t>(v)];
  centroid /= static_cast<double>(hull.vertices.size());
  for (const auto& f : hull.facets)
    for (std::size_t t = 1; t + 1 < f.size(); ++t) {
      const Vec3 a = pts[static_cast<std::size_t>(f[0])] - centroid;
      const Vec3 b = pts[static_cast<std::size_t>(f[t])] - centroid;
      const Vec3 c = pts[static_cast<std::size_t>(f[t + 1])] - centroid;
      hull.volume += a.dot(b.cross(c)) / 6.0;
    }
  return hull;
}

/// Convex hull of a subset, with facet and vertex indices expressed in the
/// indexing of the full point array.
inline ConvexHull convex_hull_of(std::span<const Point3> pts, std::span<const int> subset,
                                 double eps = 1e-9) {
  std::vector<Point3> local;
  local.reserve(subset.size());
  for (int i : subset) local.push_back(pts[static_cast<std::size_t>(i)]);
  ConvexHull h = convex_hull(local, eps);
  auto remap = [&](std::vector<int>& v) {
    for (int& i : v) i = subset[static_cast<std::size_t>(i)];
  };
  for (auto& f : h.facets) remap(f);
  remap(h.vertices);
  std::sort(h.vertices.begin(), h.vertices.end());
  return h;
}

/// Proper faces of a convex polytope given by its hull: facets (dimension 3
/// only), edges and vertices, each as a sorted index set.
struct PolytopeFaces {
  std::vector<std::vector<int>> facets;
  std::vector<std::vector<int>> edges;
  std::vector<std::vector<int>> vertices;
};

inline PolytopeFaces polytope_faces(const ConvexHull& hull) {
  PolytopeFaces out;
  std::set<std::vector<int>> edges;
  auto add_cycle_edges = [&](const std::vector<int>& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      int a = poly[i], b = poly[(i + 1) % poly.size()];
      if (a == b) continue;
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  };
  if (hull.dimension == 3) {
    for (const auto& f : hull.facets) {
      auto s = f;
      std::sort(s.begin(), s.end());
      out.facets.push_back(s);
      add_cycle_edges(f);
    }
  } else if (hull.dimension == 2) {
    add_cycle_edges(hull.facets.front());
  }
  if (hull.dimension >= 2) out.edges.assign(edges.begin(), edges.end());
  if (hull.dimension >= 1)
    for (int v : hull.vertices) out.vertices.push_back({v});
  std::sort(out.facets.begin(), out.facets.end());
  return out;
}

}  // namespace ballpoly
