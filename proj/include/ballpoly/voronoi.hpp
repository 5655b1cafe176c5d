#pragma once

// Farthest-point Voronoi tiling and its dual Delaunay complex, built by
// subset enumeration with circumsphere predicates.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ballpoly/ball_polyhedron.hpp"
#include "ballpoly/hull.hpp"

namespace ballpoly {

enum class Extent { Bounded, Ray, Line };

/// Half-spaces {x : |x - c_i| >= |x - c_j|} of one cell, written as
/// normal . x <= offset with unit normals.
struct VoronoiCell {
  int site = -1;
  std::vector<Halfspace> halfspaces;
  bool empty = true;
  bool bounded = false;

  bool contains(const Point3& x, double eps) const {
    return std::all_of(halfspaces.begin(), halfspaces.end(),
                       [&](const Halfspace& h) { return h.violation(x) <= eps; });
  }
};

struct VoronoiVertex {
  std::vector<int> sites;
  Point3 point;
  double radius = 0.0;  // distance to the sites
};

/// Segment, ray or line origin + t * direction, t in [t_min, t_max].
struct VoronoiEdge {
  std::vector<int> sites;
  Point3 origin;  // circumcenter of the sites, closest point of the line to them
  Vec3 direction;
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  double base_radius = 0.0;  // distance from origin to the sites
  Extent extent = Extent::Line;

  Point3 point_at(double t) const { return origin + t * direction; }
  /// Distance from the sites at parameter t.
  double radius_at(double t) const { return std::sqrt(base_radius * base_radius + t * t); }
};

/// Planar convex region of the bisector plane of two sites. Unbounded
/// regions are clipped to a large square and flagged.
struct VoronoiFace {
  std::vector<int> sites;  // exactly two
  Point3 origin;           // midpoint of the sites
  Vec3 axis_u, axis_v;     // in-plane basis
  std::vector<Eigen::Vector2d> polygon;
  bool bounded = true;

  Point3 to_world(const Eigen::Vector2d& q) const { return origin + q.x() * axis_u + q.y() * axis_v; }
  Point3 interior_point() const {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& q : polygon) c += q;
    return to_world(c / static_cast<double>(polygon.size()));
  }
};

struct VoronoiComplex {
  std::vector<Point3> sites;
  std::vector<VoronoiCell> cells;
  std::vector<VoronoiVertex> vertices;
  std::vector<VoronoiEdge> edges;
  std::vector<VoronoiFace> faces;
};

struct DelaunayCell {
  std::vector<int> sites;
  int dimension = 0;
};

struct DelaunayComplex {
  std::vector<Point3> sites;
  std::vector<DelaunayCell> cells;  // sorted by (dimension, sites)

  int find(const std::vector<int>& sites_sorted) const {
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].sites == sites_sorted) return static_cast<int>(i);
    return -1;
  }
  std::vector<int> cells_of_dimension(int d) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].dimension == d) out.push_back(static_cast<int>(i));
    return out;
  }
  double cell_volume(std::size_t i, double eps) const {
    return convex_hull_of(sites, cells[i].sites, eps).volume;
  }
};

namespace detail {

/// |x - c_k| <= |x - c_i| as a half-space on x.
inline Halfspace farther_than(const Point3& ci, const Point3& ck) {
  // 2 x.(c_i - c_k) <= |c_i|^2 - |c_k|^2
  Vec3 n = ci - ck;
  double off = 0.5 * (ci.squaredNorm() - ck.squaredNorm());
  const double len = n.norm();
  return {n / len, off / len};
}

/// Sutherland-Hodgman clip of a convex polygon by a.q <= b.
inline std::vector<Eigen::Vector2d> clip(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& a,
                                         double b) {
  std::vector<Eigen::Vector2d> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    const double sp = a.dot(p) - b;
    const double sq = a.dot(q) - b;
    if (sp <= 0.0) out.push_back(p);
    if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) out.push_back(p + (sp / (sp - sq)) * (q - p));
  }
  return out;
}

inline double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * a;
}

inline std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

/// Builds the farthest-point Voronoi tiling of `c` by enumerating quadruples
/// (vertices), triples (edges) and pairs (faces) of sites.
inline VoronoiComplex build_voronoi(const std::vector<Point3>& c, const Tolerance& tol = {}) {
  const std::size_t n = c.size();
  if (n < 2) throw Error(ErrorKind::Precondition, "Voronoi tiling needs at least two sites");
  VoronoiComplex vc;
  vc.sites = c;
  const double eps = tol.eps_geom;

  // Vertices: circumcenters with every other site strictly closer.
  std::set<std::vector<int>> seen;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          auto s = circumsphere(c[i], c[j], c[k], c[l], tol);
          if (!s) continue;
          const double slack = eps * std::max(1.0, s->radius);
          std::vector<int> on;
          bool ok = true;
          for (std::size_t m = 0; m < n && ok; ++m) {
            const double d = (c[m] - s->center).norm();
            if (d > s->radius + slack) ok = false;
            else if (d >= s->radius - slack) on.push_back(static_cast<int>(m));
          }
          if (!ok || !seen.insert(on).second) continue;
          vc.vertices.push_back({on, s->center, s->radius});
        }

  // Edges: the equidistance line of a triple, restricted to where all other
  // sites are strictly closer.
  seen.clear();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (collinear(c[i], c[j], c[k], eps)) continue;
        auto [p0, r0] = triangle_circumcircle(c[i], c[j], c[k]);
        const Vec3 dir = (c[j] - c[i]).cross(c[k] - c[i]).normalized();
        const double slack = eps * std::max(1.0, r0);
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        std::vector<int> on;
        bool ok = true;
        for (std::size_t m = 0; m < n && ok; ++m) {
          const Vec3 w = c[m] - p0;
          const double h = w.dot(dir);
          const double excess = w.squaredNorm() - r0 * r0;  // need excess < 2 t h
          if (std::abs(h) <= eps) {
            if (std::abs(std::sqrt(w.squaredNorm()) - r0) <= slack) on.push_back(static_cast<int>(m));
            else if (excess > 0.0) ok = false;
          } else if (h > 0.0) {
            lo = std::max(lo, excess / (2.0 * h));
          } else {
            hi = std::min(hi, excess / (2.0 * h));
          }
        }
        if (!ok || !(hi - lo > slack) || !seen.insert(on).second) continue;
        VoronoiEdge e;
        e.sites = on;
        e.origin = p0;
        e.direction = dir;
        e.t_min = lo;
        e.t_max = hi;
        e.base_radius = r0;
        const bool fin_lo = std::isfinite(lo), fin_hi = std::isfinite(hi);
        e.extent = (fin_lo && fin_hi) ? Extent::Bounded : (fin_lo || fin_hi) ? Extent::Ray : Extent::Line;
        vc.edges.push_back(e);
      }

  // Faces: bisector-plane regions where both sites are the farthest.
  double extent = 1.0;
  for (const auto& p : c) extent = std::max(extent, p.norm());
  const double box = 1e4 * extent;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      VoronoiFace f;
      f.sites = {static_cast<int>(i), static_cast<int>(j)};
      f.origin = 0.5 * (c[i] + c[j]);
      const Vec3 normal = (c[j] - c[i]).normalized();
      std::tie(f.axis_u, f.axis_v) = plane_basis(normal);
      std::vector<Eigen::Vector2d> poly = {{-box, -box}, {box, -box}, {box, box}, {-box, box}};
      for (std::size_t m = 0; m < n && !poly.empty(); ++m) {
        if (m == i || m == j) continue;
        const Halfspace h = detail::farther_than(c[i], c[m]);
        const Eigen::Vector2d a(h.normal.dot(f.axis_u), h.normal.dot(f.axis_v));
        poly = detail::clip(poly, a, h.offset - h.normal.dot(f.origin));
      }
      if (poly.size() < 3 || detail::polygon_area(poly) <= eps) continue;
      for (const auto& q : poly)
        if (std::abs(q.x()) >= box * (1 - 1e-12) || std::abs(q.y()) >= box * (1 - 1e-12)) f.bounded = false;
      f.polygon = std::move(poly);
      vc.faces.push_back(std::move(f));
    }

  vc.cells.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& cell = vc.cells[i];
    cell.site = static_cast<int>(i);
    for (std::size_t m = 0; m < n; ++m)
      if (m != i) cell.halfspaces.push_back(detail::farther_than(c[i], c[m]));
    for (const auto& f : vc.faces)
      if (f.sites[0] == static_cast<int>(i) || f.sites[1] == static_cast<int>(i)) cell.empty = false;
  }
  // A non-empty farthest-point cell always reaches infinity; record that
  // from the faces rather than assuming it.
  for (auto& cell : vc.cells) {
    if (cell.empty) continue;
    cell.bounded = true;
    for (const auto& f : vc.faces)
      if ((f.sites[0] == cell.site || f.sites[1] == cell.site) && !f.bounded) cell.bounded = false;
  }

  auto by_sites = [](const auto& a, const auto& b) { return a.sites < b.sites; };
  std::sort(vc.vertices.begin(), vc.vertices.end(), by_sites);
  std::sort(vc.edges.begin(), vc.edges.end(), by_sites);
  std::sort(vc.faces.begin(), vc.faces.end(), by_sites);
  return vc;
}

/// Delaunay complex read off the Voronoi features: one cell per feature,
/// with index set the sites of the feature, plus one point per non-empty cell.
inline DelaunayComplex delaunay_from_voronoi(const VoronoiComplex& vc, const Tolerance& tol = {}) {
  DelaunayComplex d;
  d.sites = vc.sites;
  auto dim_of = [&](const std::vector<int>& s) {
    std::vector<Point3> pts;
    for (int i : s) pts.push_back(vc.sites[static_cast<std::size_t>(i)]);
    return affine_dimension(pts, tol.eps_geom);
  };
  for (const auto& cell : vc.cells)
    if (!cell.empty) d.cells.push_back({{cell.site}, 0});
  for (const auto& f : vc.faces) d.cells.push_back({f.sites, 1});
  for (const auto& e : vc.edges) d.cells.push_back({e.sites, dim_of(e.sites)});
  for (const auto& v : vc.vertices) d.cells.push_back({v.sites, dim_of(v.sites)});
  std::sort(d.cells.begin(), d.cells.end(), [](const DelaunayCell& a, const DelaunayCell& b) {
    if (a.dimension != b.dimension) return a.dimension < b.dimension;
    return a.sites < b.sites;
  });
  return d;
}

inline DelaunayComplex build_delaunay(const std::vector<Point3>& c, const Tolerance& tol = {}) {
  return delaunay_from_voronoi(build_voronoi(c, tol), tol);
}

struct CorrespondenceReport {
  std::vector<std::string> violations;
  /// Features whose site count exceeds general position (co-spherical or
  /// co-circular sites); exempt from the strict count checks.
  std::vector<std::string> degenerate;

  bool passed() const { return violations.empty(); }
};

namespace detail {

inline std::string sites_str(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

/// x is in every V_i (i in sites) and strictly outside every other cell.
inline bool exactly_in_cells(const std::vector<Point3>& c, const std::vector<int>& sites, const Point3& x,
                             double eps) {
  const double r = (x - c[static_cast<std::size_t>(sites.front())]).norm();
  const double slack = eps * std::max(1.0, r);
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double d = (x - c[m]).norm();
    const bool member = std::binary_search(sites.begin(), sites.end(), static_cast<int>(m));
    if (member && std::abs(d - r) > slack) return false;
    if (!member && d >= r - slack) return false;
  }
  return true;
}

}  // namespace detail

/// Checks the feature correspondences between the Voronoi tiling and the
/// Delaunay complex in both directions: vertices with 3-cells, edges with
/// 2-cells and faces with segments (pairs of sites).
inline CorrespondenceReport check_feature_correspondence(const VoronoiComplex& vc, const DelaunayComplex& d,
                                                         const Tolerance& tol = {}) {
  CorrespondenceReport r;
  const double eps = tol.eps_geom;
  const auto& c = vc.sites;
  auto dim_of = [&](const std::vector<int>& s) {
    std::vector<Point3> pts;
    for (int i : s) pts.push_back(c[static_cast<std::size_t>(i)]);
    return affine_dimension(pts, eps);
  };

  for (const auto& v : vc.vertices) {
    if (v.sites.size() > 4) r.degenerate.push_back("vertex " + detail::sites_str(v.sites));
    if (dim_of(v.sites) != 3) r.violations.push_back("vertex sites not spatial " + detail::sites_str(v.sites));
    const int cell = d.find(v.sites);
    if (cell < 0 || d.cells[static_cast<std::size_t>(cell)].dimension != 3)
      r.violations.push_back("vertex without 3-cell " + detail::sites_str(v.sites));
    if (!detail::exactly_in_cells(c, v.sites, v.point, eps))
      r.violations.push_back("vertex not the common point of its cells " + detail::sites_str(v.sites));
  }
  for (const auto& e : vc.edges) {
    if (e.sites.size() > 3) r.degenerate.push_back("edge " + detail::sites_str(e.sites));
    if (dim_of(e.sites) != 2) r.violations.push_back("edge sites not planar " + detail::sites_str(e.sites));
    const int cell = d.find(e.sites);
    if (cell < 0 || d.cells[static_cast<std::size_t>(cell)].dimension != 2)
      r.violations.push_back("edge without 2-cell " + detail::sites_str(e.sites));
    // a relative-interior point of the edge lies exactly in the edge's cells
    double t;
    if (std::isfinite(e.t_min) && std::isfinite(e.t_max)) t = 0.5 * (e.t_min + e.t_max);
    else if (std::isfinite(e.t_min)) t = e.t_min + 1.0;
    else if (std::isfinite(e.t_max)) t = e.t_max - 1.0;
    else t = 0.0;
    if (!detail::exactly_in_cells(c, e.sites, e.point_at(t), eps))
      r.violations.push_back("edge interior not in exactly its cells " + detail::sites_str(e.sites));
    // finite ends are Voronoi vertices whose sites contain the edge's
    for (double end : {e.t_min, e.t_max}) {
      if (!std::isfinite(end)) continue;
      const Point3 x = e.point_at(end);
      bool found = false;
      for (const auto& v : vc.vertices)
        if ((v.point - x).norm() <= 1e3 * eps * std::max(1.0, v.radius) &&
            std::includes(v.sites.begin(), v.sites.end(), e.sites.begin(), e.sites.end()))
          found = true;
      if (!found) r.violations.push_back("edge endpoint is not a vertex " + detail::sites_str(e.sites));
    }
  }
  for (const auto& f : vc.faces) {
    const int cell = d.find(f.sites);
    if (f.sites.size() != 2 || cell < 0 || d.cells[static_cast<std::size_t>(cell)].dimension != 1)
      r.violations.push_back("face without segment " + detail::sites_str(f.sites));
    if (!detail::exactly_in_cells(c, f.sites, f.interior_point(), eps))
      r.violations.push_back("face interior not in exactly its cells " + detail::sites_str(f.sites));
  }

  // Reverse directions: every Delaunay cell of dimension 1..3 is realized by
  // the matching Voronoi feature, found by solving the equidistance system.
  for (const auto& cell : d.cells) {
    if (cell.dimension == 0) continue;
    const auto& s = cell.sites;
    if (cell.dimension == 3) {
      const bool has = std::any_of(vc.vertices.begin(), vc.vertices.end(), [&](const VoronoiVertex& v) { return v.sites == s; });
      if (!has) r.violations.push_back("3-cell without vertex " + detail::sites_str(s));
      // the equidistant point of the sites is unique and in exactly their cells
      Eigen::MatrixXd a(static_cast<Eigen::Index>(s.size() - 1), 3);
      Eigen::VectorXd b(static_cast<Eigen::Index>(s.size() - 1));
      const Point3& c0 = c[static_cast<std::size_t>(s[0])];
      for (std::size_t k = 1; k < s.size(); ++k) {
        const Point3& ck = c[static_cast<std::size_t>(s[k])];
        a.row(static_cast<Eigen::Index>(k - 1)) = 2.0 * (ck - c0).transpose();
        b[static_cast<Eigen::Index>(k - 1)] = ck.squaredNorm() - c0.squaredNorm();
      }
      const Point3 x = a.colPivHouseholderQr().solve(b);
      if (!detail::exactly_in_cells(c, s, x, 1e3 * eps))
        r.violations.push_back("3-cell sites have no exclusive equidistant point " + detail::sites_str(s));
    } else if (cell.dimension == 2) {
      const bool has = std::any_of(vc.edges.begin(), vc.edges.end(), [&](const VoronoiEdge& e) { return e.sites == s; });
      if (!has) r.violations.push_back("2-cell without edge " + detail::sites_str(s));
    } else if (cell.dimension == 1) {
      if (s.size() != 2) {
        r.violations.push_back("1-cell with more than two sites " + detail::sites_str(s));
        continue;
      }
      const bool has = std::any_of(vc.faces.begin(), vc.faces.end(), [&](const VoronoiFace& f) { return f.sites == s; });
      if (!has) r.violations.push_back("segment without face " + detail::sites_str(s));
    }
  }
  return r;
}

}  // namespace ballpoly
