#pragma once

// Triangle meshes of Q's boundary and of the ball-polyhedron itself, the OFF
// writer and a watertightness audit.

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ballpoly/ball_polyhedron.hpp"
#include "ballpoly/truncated.hpp"

namespace ballpoly {

struct TriangleMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<int, 3>> triangles;
  /// Ball whose face a triangle samples, -1 when not applicable.
  std::vector<int> triangle_face;
  /// The mesh approximates a curved surface.
  bool approximate = false;
};

/// Boundary of Q, interior faces omitted; polygons are fan-triangulated and
/// vertices renumbered in ascending site order.
inline TriangleMesh q_boundary_mesh(const PolyhedronQ& q) {
  TriangleMesh m;
  std::map<int, int> index;
  for (int v : q.boundary_vertices) {
    index[v] = static_cast<int>(m.vertices.size());
    m.vertices.push_back(q.sites[static_cast<std::size_t>(v)]);
  }
  for (const auto& poly : q.boundary_faces)
    for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
      m.triangles.push_back({index[poly[0]], index[poly[t]], index[poly[t + 1]]});
      m.triangle_face.push_back(-1);
    }
  return m;
}

/// Flat model of P's boundary: each face replaced by the polygon through its
/// vertices in boundary-cycle order, fan-triangulated.
inline TriangleMesh p_vertex_polygon_mesh(const BallPolyhedron& p) {
  TriangleMesh m;
  for (const auto& v : p.vertices) m.vertices.push_back(v.position);
  for (const auto& face : p.faces) {
    if (face.cycles.size() != 1) throw Error(ErrorKind::Precondition, "face without a single boundary cycle");
    std::vector<int> poly;
    for (const auto& step : face.cycles.front()) {
      const auto& e = p.edges[static_cast<std::size_t>(step.edge)];
      if (e.full_circle()) throw Error(ErrorKind::Precondition, "face bounded by a full circle");
      poly.push_back(step.forward ? e.start : e.end);
    }
    for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
      m.triangles.push_back({poly[0], poly[t], poly[t + 1]});
      m.triangle_face.push_back(face.ball);
    }
  }
  return m;
}

namespace detail {

inline Point3 onto_sphere(const Point3& center, const Point3& x) {
  return center + (x - center).normalized();
}

inline void add_sphere_mesh(TriangleMesh& m, const Point3& center, int depth, int face) {
  std::vector<Point3> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<std::array<int, 3>> t = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                       {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  for (int level = 0; level < depth; ++level) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      return mid[key] = static_cast<int>(v.size() - 1);
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& tri : t) {
      const int ab = midpoint(tri[0], tri[1]), bc = midpoint(tri[1], tri[2]), ca = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({ab, tri[1], bc});
      next.push_back({ca, bc, tri[2]});
      next.push_back({ab, bc, ca});
    }
    t = std::move(next);
  }
  const int base = static_cast<int>(m.vertices.size());
  for (const auto& p : v) m.vertices.push_back(center + p);
  for (const auto& tri : t) {
    m.triangles.push_back({base + tri[0], base + tri[1], base + tri[2]});
    m.triangle_face.push_back(face);
  }
}

}  // namespace detail

/// Sampled triangulation of the spherical boundary of P. Every edge arc is
/// split into 2^depth segments shared by its two faces; each face is filled
/// by 2^depth rings around a central point, projected onto its sphere.
inline TriangleMesh p_boundary_mesh(const BallPolyhedron& p, int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  TriangleMesh m;
  m.approximate = true;
  if (p.faces.size() == 1 && p.faces.front().whole_sphere) {
    detail::add_sphere_mesh(m, p.centers[0], depth, 0);
    return m;
  }
  const int segments = 1 << depth;
  for (const auto& v : p.vertices) m.vertices.push_back(v.position);

  // interior sample indices of every edge, in the stored direction
  std::vector<std::vector<int>> edge_samples(p.edges.size());
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    const auto& arc = p.edges[e].arc;
    const int pieces = arc.full_circle ? 4 * segments : segments;
    const int first = arc.full_circle ? 0 : 1;
    for (int k = first; k < pieces; ++k) {
      edge_samples[e].push_back(static_cast<int>(m.vertices.size()));
      m.vertices.push_back(arc.point_at_fraction(static_cast<double>(k) / pieces));
    }
  }

  for (const auto& face : p.faces) {
    if (face.cycles.size() != 1) throw Error(ErrorKind::Precondition, "face without a single boundary cycle");
    const Point3& c = p.centers[static_cast<std::size_t>(face.ball)];
    std::vector<int> ring;
    for (const auto& step : face.cycles.front()) {
      const auto& e = p.edges[static_cast<std::size_t>(step.edge)];
      const auto& samples = edge_samples[static_cast<std::size_t>(step.edge)];
      if (!e.full_circle()) ring.push_back(step.forward ? e.start : e.end);
      if (step.forward) ring.insert(ring.end(), samples.begin(), samples.end());
      else ring.insert(ring.end(), samples.rbegin(), samples.rend());
    }
    Point3 mean = Point3::Zero();
    for (int i : ring) mean += m.vertices[static_cast<std::size_t>(i)];
    mean /= static_cast<double>(ring.size());
    const Point3 apex = detail::onto_sphere(c, mean);
    const int apex_index = static_cast<int>(m.vertices.size());
    m.vertices.push_back(apex);

    // rings[l][k]: level l in 1..segments, level `segments` is the boundary
    std::vector<std::vector<int>> rings(static_cast<std::size_t>(segments) + 1);
    rings[static_cast<std::size_t>(segments)] = ring;
    for (int l = 1; l < segments; ++l) {
      const double s = static_cast<double>(l) / segments;
      for (int b : ring) {
        rings[static_cast<std::size_t>(l)].push_back(static_cast<int>(m.vertices.size()));
        m.vertices.push_back(detail::onto_sphere(c, apex + s * (m.vertices[static_cast<std::size_t>(b)] - apex)));
      }
    }
    const std::size_t k = ring.size();
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = (i + 1) % k;
      m.triangles.push_back({apex_index, rings[1][i], rings[1][j]});
      m.triangle_face.push_back(face.ball);
      for (std::size_t l = 1; l < static_cast<std::size_t>(segments); ++l) {
        const auto& in = rings[l];
        const auto& out = rings[l + 1];
        m.triangles.push_back({in[i], out[i], out[j]});
        m.triangles.push_back({in[i], out[j], in[j]});
        m.triangle_face.push_back(face.ball);
        m.triangle_face.push_back(face.ball);
      }
    }
  }
  return m;
}

struct MeshAudit {
  bool directed_edges_unique = false;  // consistent orientation
  bool closed = false;                 // every edge shared by exactly two triangles
  long euler = 0;

  bool watertight() const { return directed_edges_unique && closed; }
};

inline MeshAudit audit_mesh(const TriangleMesh& m) {
  MeshAudit a;
  std::map<std::pair<int, int>, int> directed;
  std::set<int> used;
  for (const auto& t : m.triangles)
    for (int i = 0; i < 3; ++i) {
      ++directed[{t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)]}];
      used.insert(t[static_cast<std::size_t>(i)]);
    }
  a.directed_edges_unique = true;
  a.closed = true;
  std::set<std::pair<int, int>> undirected;
  for (const auto& [e, count] : directed) {
    if (count != 1) a.directed_edges_unique = false;
    if (!directed.count({e.second, e.first})) a.closed = false;
    undirected.insert({std::min(e.first, e.second), std::max(e.first, e.second)});
  }
  a.euler = static_cast<long>(used.size()) - static_cast<long>(undirected.size()) +
            static_cast<long>(m.triangles.size());
  return a;
}

/// OFF text: "OFF", counts "V F E", vertex lines, "3 i j k" face lines.
inline std::string to_off(const TriangleMesh& m) {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : m.triangles)
    for (int i = 0; i < 3; ++i) {
      const int a = t[static_cast<std::size_t>(i)], b = t[static_cast<std::size_t>((i + 1) % 3)];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  std::string out = "OFF\n";
  if (m.approximate) out += "# approximate: sampled triangulation of a curved boundary\n";
  out += std::to_string(m.vertices.size()) + " " + std::to_string(m.triangles.size()) + " " +
         std::to_string(edges.size()) + "\n";
  char buf[128];
  for (const auto& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "%.15g %.15g %.15g\n", v.x(), v.y(), v.z());
    out += buf;
  }
  for (const auto& t : m.triangles)
    out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  return out;
}

inline void write_off(const TriangleMesh& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  f << to_off(m);
  if (!f) throw Error(ErrorKind::Io, "failed writing " + path);
}

}  // namespace ballpoly
