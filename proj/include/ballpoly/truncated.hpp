#pragma once

// Truncated Voronoi tiling and truncated Delaunay complex of a ball-polyhedron,
// the polyhedron Q made of its 3-dimensional cells, and the structural checks
// relating the boundary of Q to the faces of P.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ballpoly/ball_polyhedron.hpp"
#include "ballpoly/hull.hpp"
#include "ballpoly/simplicial.hpp"
#include "ballpoly/voronoi.hpp"

namespace ballpoly {

/// V_i clipped by the unit ball around c_i.
struct TruncatedCell {
  int site = -1;
  Point3 center;
  VoronoiCell cell;

  bool contains(const Point3& x, double eps) const {
    return cell.contains(x, eps) && (x - center).norm() <= 1.0 + eps;
  }
};

inline std::vector<TruncatedCell> truncated_voronoi(const VoronoiComplex& vc) {
  std::vector<TruncatedCell> out;
  for (const auto& cell : vc.cells)
    out.push_back({cell.site, vc.sites[static_cast<std::size_t>(cell.site)], cell});
  return out;
}

struct TruncatedMember {
  int delaunay_cell = -1;
  std::vector<int> sites;
  int dimension = 0;
  /// Point of the closed co-feature nearest to the sites; it lies in B(C)
  /// and certifies membership.
  Point3 witness;
  double witness_radius = 0.0;
};

struct TruncatedDelaunayComplex {
  std::vector<Point3> sites;
  std::vector<TruncatedMember> members;  // in Delaunay cell order
  /// Cells whose witness radius is within eps_geom of 1; not classified.
  std::vector<std::string> degenerate;

  int find(const std::vector<int>& s) const {
    for (std::size_t i = 0; i < members.size(); ++i)
      if (members[i].sites == s) return static_cast<int>(i);
    return -1;
  }
  std::size_t count(int dimension) const {
    return static_cast<std::size_t>(std::count_if(members.begin(), members.end(),
                                                  [&](const TruncatedMember& m) { return m.dimension == dimension; }));
  }
};

/// Closest point to the sites of a Delaunay cell on its closed Voronoi
/// co-feature {x : equidistant from the sites, no other site farther}.
inline std::optional<Point3> cofeature_witness(const std::vector<Point3>& c, const std::vector<int>& sites,
                                               double eps) {
  const Point3& c0 = c[static_cast<std::size_t>(sites.front())];
  std::vector<Hyperplane> eqs;
  for (std::size_t k = 1; k < sites.size(); ++k) {
    const Halfspace h = detail::farther_than(c0, c[static_cast<std::size_t>(sites[k])]);
    eqs.push_back({h.normal, h.offset});
  }
  std::vector<Halfspace> ineqs;
  for (std::size_t m = 0; m < c.size(); ++m)
    if (!std::binary_search(sites.begin(), sites.end(), static_cast<int>(m)))
      ineqs.push_back(detail::farther_than(c0, c[m]));
  return project_onto_polyhedron(c0, eqs, ineqs, eps);
}

/// A Delaunay cell is kept when its co-feature reaches into B(C), i.e. when
/// the co-feature point nearest to the sites is within unit distance of them.
inline TruncatedDelaunayComplex build_truncated_delaunay(const CenterSet& c, const VoronoiComplex& vc,
                                                         const DelaunayComplex& d) {
  (void)vc;
  const Tolerance& tol = c.tolerance();
  TruncatedDelaunayComplex t;
  t.sites = c.points();
  double scale = 1.0;
  for (const auto& p : t.sites) scale = std::max(scale, p.norm());
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    const auto& cell = d.cells[i];
    const auto w = cofeature_witness(t.sites, cell.sites, 100.0 * tol.eps_geom * scale);
    if (!w) {
      t.degenerate.push_back("empty co-feature " + detail::sites_str(cell.sites));
      continue;
    }
    const double r = (*w - t.sites[static_cast<std::size_t>(cell.sites.front())]).norm();
    if (std::abs(r - 1.0) <= tol.eps_geom) {
      t.degenerate.push_back("co-feature tangent to the boundary " + detail::sites_str(cell.sites));
      continue;
    }
    if (r < 1.0) t.members.push_back({static_cast<int>(i), cell.sites, cell.dimension, *w, r});
  }
  return t;
}

struct LemmaReport {
  bool skipped = false;
  std::string skip_reason;
  std::vector<std::string> violations;
  double min_margin = std::numeric_limits<double>::infinity();

  bool passed() const { return !skipped && violations.empty(); }
};

/// No Voronoi vertex on the boundary of P and no Voronoi edge tangent to it,
/// both with margin larger than eps_geom.
inline LemmaReport check_no_boundary_vertex(const VoronoiComplex& vc, const BallPolyhedron& p) {
  LemmaReport r;
  if (!is_simple(p)) {
    r.skipped = true;
    r.skip_reason = "precondition not met: P is not simple";
    return r;
  }
  const double eps = p.centers.tolerance().eps_geom;
  for (const auto& v : vc.vertices) {
    const double margin = std::abs(v.radius - 1.0);
    r.min_margin = std::min(r.min_margin, margin);
    if (margin <= eps) r.violations.push_back("Voronoi vertex on the boundary " + detail::sites_str(v.sites));
  }
  for (const auto& e : vc.edges) {
    // the distance to the sites is smallest at t = 0; a tangency needs that
    // point inside the edge and at unit distance
    if (!(e.t_min < 0.0 && 0.0 < e.t_max)) continue;
    const double margin = std::abs(e.base_radius - 1.0);
    r.min_margin = std::min(r.min_margin, margin);
    if (margin <= eps) r.violations.push_back("Voronoi edge tangent to the boundary " + detail::sites_str(e.sites));
  }
  return r;
}

/// D^t is contained in D and contains every face of each of its members.
inline LemmaReport check_subcomplex(const TruncatedDelaunayComplex& t, const DelaunayComplex& d, double eps) {
  LemmaReport r;
  for (const auto& m : t.members) {
    if (d.find(m.sites) < 0) r.violations.push_back("member not in D " + detail::sites_str(m.sites));
    if (m.dimension == 0) continue;
    const auto faces = polytope_faces(convex_hull_of(t.sites, m.sites, eps));
    for (const auto* group : {&faces.facets, &faces.edges, &faces.vertices})
      for (const auto& f : *group)
        if (t.find(f) < 0)
          r.violations.push_back("face " + detail::sites_str(f) + " of " + detail::sites_str(m.sites) + " missing");
  }
  return r;
}

struct PolyhedronQ {
  std::vector<Point3> sites;
  std::vector<std::vector<int>> cells;  // sorted site sets of the 3-cells
  /// Boundary 2-faces as polygons, counterclockwise seen from outside.
  std::vector<std::vector<int>> boundary_faces;
  std::vector<std::vector<int>> interior_faces;  // sorted site sets
  std::vector<std::array<int, 2>> boundary_edges;
  std::vector<int> boundary_vertices;
  std::vector<int> vertices;  // all vertices of the 3-cells

  std::array<std::size_t, 3> boundary_f_vector() const {
    return {boundary_vertices.size(), boundary_edges.size(), boundary_faces.size()};
  }
  bool boundary_is_triangulated() const {
    return std::all_of(boundary_faces.begin(), boundary_faces.end(), [](const auto& f) { return f.size() == 3; });
  }
};

/// Keeps the 3-dimensional members of D^t with all their faces and extracts
/// the boundary: the 2-faces lying in exactly one 3-cell, with their edges
/// and vertices.
inline PolyhedronQ extract_Q(const TruncatedDelaunayComplex& t, double eps = 1e-9) {
  PolyhedronQ q;
  q.sites = t.sites;
  for (const auto& m : t.members)
    if (m.dimension == 3) q.cells.push_back(m.sites);
  if (q.cells.empty()) throw Error(ErrorKind::NoThreeCell);

  std::map<std::vector<int>, std::pair<std::vector<int>, int>> facets;
  std::set<int> verts;
  for (const auto& cell : q.cells) {
    const auto hull = convex_hull_of(q.sites, cell, eps);
    for (const auto& poly : hull.facets) {
      auto key = poly;
      std::sort(key.begin(), key.end());
      auto [it, inserted] = facets.try_emplace(key, poly, 0);
      ++it->second.second;
    }
    verts.insert(hull.vertices.begin(), hull.vertices.end());
  }
  q.vertices.assign(verts.begin(), verts.end());

  std::set<std::array<int, 2>> edges;
  std::set<int> bverts;
  for (const auto& [key, entry] : facets) {
    if (entry.second == 1) {
      q.boundary_faces.push_back(entry.first);
      const auto& poly = entry.first;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const int a = poly[i], b = poly[(i + 1) % poly.size()];
        edges.insert({std::min(a, b), std::max(a, b)});
        bverts.insert(a);
      }
    } else {
      q.interior_faces.push_back(key);
    }
  }
  q.boundary_edges.assign(edges.begin(), edges.end());
  q.boundary_vertices.assign(bverts.begin(), bverts.end());
  return q;
}

/// The 2-faces of the boundary of Q are triangles matching the vertices of
/// P one to one: triangle {i,j,k} iff faces i, j, k of P meet at a vertex.
inline LemmaReport check_boundary_triangles(const PolyhedronQ& q, const BallPolyhedron& p) {
  LemmaReport r;
  if (!is_simple(p) || !is_standard(p)) {
    r.skipped = true;
    r.skip_reason = "precondition not met: P is not simple and standard";
    return r;
  }
  std::set<std::vector<int>> triangles;
  for (const auto& f : q.boundary_faces) {
    auto s = f;
    std::sort(s.begin(), s.end());
    if (s.size() != 3) r.violations.push_back("boundary face is not a triangle " + detail::sites_str(s));
    else triangles.insert(s);
  }
  std::set<std::vector<int>> corners;
  for (const auto& v : p.vertices) corners.insert(v.balls);
  for (const auto& t : triangles)
    if (!corners.count(t)) r.violations.push_back("triangle without vertex of P " + detail::sites_str(t));
  for (const auto& c : corners)
    if (!triangles.count(c)) r.violations.push_back("vertex of P without triangle " + detail::sites_str(c));
  if (q.boundary_faces.size() != p.vertices.size())
    r.violations.push_back("triangle count " + std::to_string(q.boundary_faces.size()) + " != vertex count " +
                           std::to_string(p.vertices.size()));
  return r;
}

/// Nerve of the faces of P: sets of faces with a common point. Faces meet
/// only along edges and at vertices, so those generate it.
inline SimplicialComplex nerve_of_faces(const BallPolyhedron& p) {
  std::vector<Simplex> gens;
  for (std::size_t f = 0; f < p.faces.size(); ++f) gens.push_back({static_cast<int>(f)});
  for (const auto& e : p.edges) gens.push_back({e.ball_a, e.ball_b});
  for (const auto& v : p.vertices) gens.push_back(v.balls);
  return SimplicialComplex::generated_by(gens);
}

struct NerveReport {
  bool skipped = false;
  std::string skip_reason;
  bool isomorphic = false;
  SphereCheck sphere;
  std::vector<std::string> violations;

  bool passed() const { return !skipped && isomorphic && sphere.is_sphere(); }
};

/// c_i -> F_i maps the complex generated by the boundary triangles of Q onto
/// the nerve of the faces of P, and that complex is a combinatorial 2-sphere.
inline NerveReport check_nerve_isomorphism(const PolyhedronQ& q, const BallPolyhedron& p) {
  NerveReport r;
  if (!is_simple(p) || !is_standard(p)) {
    r.skipped = true;
    r.skip_reason = "precondition not met: P is not simple and standard";
    return r;
  }
  std::vector<Simplex> tris;
  for (const auto& f : q.boundary_faces) tris.push_back(f);
  const auto s = SimplicialComplex::generated_by(tris);
  const auto nerve = nerve_of_faces(p);
  r.isomorphic = s == nerve;
  if (!r.isomorphic) {
    for (const auto& x : s.simplices())
      if (!nerve.contains(x)) r.violations.push_back("simplex of S not in nerve " + detail::sites_str(x));
    for (const auto& x : nerve.simplices())
      if (!s.contains(x)) r.violations.push_back("nerve simplex not in S " + detail::sites_str(x));
  }
  if (!nerve.edge_property()) r.violations.push_back("nerve lacks the edge property");
  r.sphere = check_two_sphere(s);
  if (!r.sphere.is_sphere()) r.violations.push_back("S is not a combinatorial 2-sphere");
  return r;
}

}  // namespace ballpoly
