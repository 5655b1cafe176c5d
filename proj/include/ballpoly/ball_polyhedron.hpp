#pragma once

// Ball-polyhedra: intersections of closed unit balls. Builds the
// vertex-edge-face structure, the simple/standard predicates and the dual
// ball-polyhedron generated by the vertices.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ballpoly/geom.hpp"

namespace ballpoly {

/// Ordered, labeled set of unit-ball centers.
class CenterSet {
 public:
  CenterSet() = default;

  explicit CenterSet(std::vector<Point3> centers, std::vector<std::string> labels = {},
                     Tolerance tol = {})
      : centers_(std::move(centers)), labels_(std::move(labels)), tol_(tol) {
    tol_.validate();
    if (centers_.empty()) throw std::invalid_argument("center set must not be empty");
    if (labels_.empty()) {
      for (std::size_t i = 0; i < centers_.size(); ++i) labels_.push_back("c" + std::to_string(i));
    }
    if (labels_.size() != centers_.size())
      throw std::invalid_argument("label count does not match center count");
    for (const auto& c : centers_)
      if (!is_finite(c)) throw std::invalid_argument("center coordinates must be finite");
    std::set<std::string> uniq(labels_.begin(), labels_.end());
    if (uniq.size() != labels_.size()) throw std::invalid_argument("labels must be unique");
    for (std::size_t i = 0; i < centers_.size(); ++i)
      for (std::size_t j = i + 1; j < centers_.size(); ++j)
        if ((centers_[i] - centers_[j]).norm() <= tol_.eps_geom)
          throw Error(ErrorKind::CoincidentCenters, labels_[i] + ", " + labels_[j]);
  }

  std::size_t size() const { return centers_.size(); }
  const Point3& operator[](std::size_t i) const { return centers_[i]; }
  const std::vector<Point3>& points() const { return centers_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Tolerance& tolerance() const { return tol_; }

  CenterSet subset(const std::vector<int>& keep) const {
    std::vector<Point3> c;
    std::vector<std::string> l;
    for (int i : keep) {
      c.push_back(centers_[static_cast<std::size_t>(i)]);
      l.push_back(labels_[static_cast<std::size_t>(i)]);
    }
    return CenterSet(std::move(c), std::move(l), tol_);
  }

 private:
  std::vector<Point3> centers_;
  std::vector<std::string> labels_;
  Tolerance tol_;
};

struct BPVertex {
  Point3 position;
  std::vector<int> balls;  // sorted center indices at unit distance
  std::vector<int> edges;  // incident edges (a loop edge appears twice)
};

/// Edge on the circle of balls `ball_a < ball_b`. The arc runs
/// counterclockwise about (c_b - c_a) from `start` to `end`.
struct BPEdge {
  int ball_a = -1;
  int ball_b = -1;
  Arc3 arc;
  int start = -1;  // vertex indices, -1 for a full circle
  int end = -1;

  bool full_circle() const { return arc.full_circle; }
  std::set<int> endpoints() const {
    if (start < 0) return {};
    return {start, end};
  }
};

/// One step along a face boundary cycle: the edge and whether it is walked
/// in its stored direction.
struct CycleStep {
  int edge = -1;
  bool forward = true;
};

struct BPFace {
  int ball = -1;
  /// Boundary cycles, counterclockwise seen from outside the sphere.
  std::vector<std::vector<CycleStep>> cycles;
  bool whole_sphere = false;
};

/// Vertex-edge-face incidences of a ball-polyhedron. Together with the empty
/// set and the body itself these elements form the incidence poset.
struct FaceLattice {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t face_count = 0;
  std::vector<std::set<int>> edge_vertices;
  std::vector<std::set<int>> face_edges;
  std::vector<std::set<int>> face_vertices;

  bool vertex_in_edge(int v, int e) const { return edge_vertices[static_cast<std::size_t>(e)].count(v) > 0; }
  bool edge_in_face(int e, int f) const { return face_edges[static_cast<std::size_t>(f)].count(e) > 0; }
  bool vertex_in_face(int v, int f) const { return face_vertices[static_cast<std::size_t>(f)].count(v) > 0; }
};

class BallPolyhedron {
 public:
  CenterSet centers;
  std::vector<BPVertex> vertices;
  std::vector<BPEdge> edges;
  /// faces[i] belongs to ball i.
  std::vector<BPFace> faces;

  std::array<std::size_t, 3> f_vector() const { return {vertices.size(), edges.size(), faces.size()}; }

  int find_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].ball_a == a && edges[e].ball_b == b) return static_cast<int>(e);
    return -1;
  }

  int find_vertex(const std::vector<int>& balls) const {
    for (std::size_t v = 0; v < vertices.size(); ++v)
      if (vertices[v].balls == balls) return static_cast<int>(v);
    return -1;
  }

  FaceLattice lattice() const {
    FaceLattice l;
    l.vertex_count = vertices.size();
    l.edge_count = edges.size();
    l.face_count = faces.size();
    l.edge_vertices.resize(edges.size());
    l.face_edges.resize(faces.size());
    l.face_vertices.resize(faces.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      l.edge_vertices[e] = edges[e].endpoints();
      l.face_edges[static_cast<std::size_t>(edges[e].ball_a)].insert(static_cast<int>(e));
      l.face_edges[static_cast<std::size_t>(edges[e].ball_b)].insert(static_cast<int>(e));
    }
    for (std::size_t v = 0; v < vertices.size(); ++v)
      for (int b : vertices[v].balls) l.face_vertices[static_cast<std::size_t>(b)].insert(static_cast<int>(v));
    return l;
  }

  /// Unit tangent of edge `e` at its point with angle `theta`, in the
  /// direction the edge is walked.
  Vec3 edge_tangent(const CycleStep& step, double theta) const {
    const Vec3 t = edges[static_cast<std::size_t>(step.edge)].arc.circle.tangent_at(theta);
    return step.forward ? t : Vec3(-t);
  }
};

/// Smallest enclosing ball radius of C subtracted from 1: the radius of the
/// largest ball inside B(C).
inline double interior_radius(const CenterSet& c) {
  return 1.0 - min_enclosing_ball(c.points()).radius;
}

/// B(C) has non-empty interior: an open ball of radius eps_geom fits inside.
inline bool has_interior(const CenterSet& c) { return interior_radius(c) > c.tolerance().eps_geom; }

namespace detail {

inline bool inside_all(const CenterSet& c, const Point3& x, double slack) {
  for (const auto& p : c.points())
    if ((x - p).norm() > 1.0 + slack) return false;
  return true;
}

struct RawStructure {
  std::vector<BPVertex> vertices;
  std::vector<BPEdge> edges;
};

/// Vertices and edges of B(C) without requiring C to be reduced.
inline RawStructure raw_structure(const CenterSet& c) {
  const Tolerance& tol = c.tolerance();
  const double merge = 10.0 * tol.eps_geom;
  const std::size_t n = c.size();
  RawStructure out;

  // Vertices: triple points inside every ball, merged when they coincide.
  std::vector<Point3> found;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (collinear(c[i], c[j], c[k], tol.eps_geom)) continue;
        for (const auto& p : triple_points(c[i], c[j], c[k], tol)) {
          if (!inside_all(c, p, tol.eps_geom)) continue;
          bool dup = false;
          for (const auto& q : found)
            if ((p - q).norm() <= merge) {
              dup = true;
              break;
            }
          if (!dup) found.push_back(p);
        }
      }
  for (const auto& p : found) {
    BPVertex v;
    v.position = p;
    for (std::size_t m = 0; m < n; ++m)
      if (std::abs((p - c[m]).norm() - 1.0) <= merge) v.balls.push_back(static_cast<int>(m));
    out.vertices.push_back(std::move(v));
  }
  std::sort(out.vertices.begin(), out.vertices.end(), [](const BPVertex& a, const BPVertex& b) {
    if (a.balls != b.balls) return a.balls < b.balls;
    return std::lexicographical_compare(a.position.data(), a.position.data() + 3,
                                        b.position.data(), b.position.data() + 3);
  });

  // Edges: arcs of each pair circle between consecutive vertices that stay
  // inside every other ball.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto circle = sphere_pair_circle(c[i], c[j], tol);
      if (!circle || circle->radius == 0.0) continue;
      auto inside_others = [&](const Point3& x) {
        for (std::size_t m = 0; m < n; ++m) {
          if (m == i || m == j) continue;
          if ((x - c[m]).norm() > 1.0 + tol.eps_geom) return false;
        }
        return true;
      };
      std::vector<std::pair<double, int>> on_circle;
      for (std::size_t v = 0; v < out.vertices.size(); ++v) {
        const auto& balls = out.vertices[v].balls;
        if (std::binary_search(balls.begin(), balls.end(), static_cast<int>(i)) &&
            std::binary_search(balls.begin(), balls.end(), static_cast<int>(j)))
          on_circle.emplace_back(circle->angle_of(out.vertices[v].position), static_cast<int>(v));
      }
      std::sort(on_circle.begin(), on_circle.end());
      if (on_circle.empty()) {
        if (!inside_others(circle->point_at(0.0))) continue;
        BPEdge e;
        e.ball_a = static_cast<int>(i);
        e.ball_b = static_cast<int>(j);
        e.arc = Arc3{*circle, 0.0, kTwoPi, true};
        out.edges.push_back(e);
        continue;
      }
      for (std::size_t s = 0; s < on_circle.size(); ++s) {
        const auto& [t0, v0] = on_circle[s];
        const auto& [t1_raw, v1] = on_circle[(s + 1) % on_circle.size()];
        const double t1 = (s + 1 == on_circle.size()) ? t1_raw + kTwoPi : t1_raw;
        Arc3 arc{*circle, t0, t1, false};
        if (!inside_others(arc.midpoint())) continue;
        BPEdge e;
        e.ball_a = static_cast<int>(i);
        e.ball_b = static_cast<int>(j);
        e.arc = arc;
        e.start = v0;
        e.end = v1;
        out.edges.push_back(e);
      }
    }
  for (std::size_t e = 0; e < out.edges.size(); ++e) {
    const auto& edge = out.edges[e];
    if (edge.start < 0) continue;
    out.vertices[static_cast<std::size_t>(edge.start)].edges.push_back(static_cast<int>(e));
    out.vertices[static_cast<std::size_t>(edge.end)].edges.push_back(static_cast<int>(e));
  }
  return out;
}

/// Links the oriented boundary edges of one face into cycles.
inline std::vector<std::vector<CycleStep>> face_cycles(const BallPolyhedron& p, int ball) {
  std::vector<CycleStep> steps;
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    if (p.edges[e].ball_a == ball) steps.push_back({static_cast<int>(e), true});
    else if (p.edges[e].ball_b == ball) steps.push_back({static_cast<int>(e), false});
  }
  const Point3& center = p.centers[static_cast<std::size_t>(ball)];
  auto origin = [&](const CycleStep& s) {
    const auto& e = p.edges[static_cast<std::size_t>(s.edge)];
    return s.forward ? e.start : e.end;
  };
  auto dest = [&](const CycleStep& s) {
    const auto& e = p.edges[static_cast<std::size_t>(s.edge)];
    return s.forward ? e.end : e.start;
  };
  auto out_tangent = [&](const CycleStep& s) {
    const auto& a = p.edges[static_cast<std::size_t>(s.edge)].arc;
    return p.edge_tangent(s, s.forward ? a.theta_start : a.theta_end);
  };
  auto in_tangent = [&](const CycleStep& s) {
    const auto& a = p.edges[static_cast<std::size_t>(s.edge)].arc;
    return p.edge_tangent(s, s.forward ? a.theta_end : a.theta_start);
  };

  std::vector<std::vector<CycleStep>> cycles;
  std::vector<bool> used(steps.size(), false);
  for (std::size_t s = 0; s < steps.size(); ++s) {
    if (used[s]) continue;
    if (p.edges[static_cast<std::size_t>(steps[s].edge)].full_circle()) {
      used[s] = true;
      cycles.push_back({steps[s]});
      continue;
    }
    std::vector<CycleStep> cycle;
    std::size_t cur = s;
    while (!used[cur]) {
      used[cur] = true;
      cycle.push_back(steps[cur]);
      const int v = dest(steps[cur]);
      const Vec3 normal = p.vertices[static_cast<std::size_t>(v)].position - center;
      const Vec3 back = -in_tangent(steps[cur]);
      std::size_t next = steps.size();
      double best = kTwoPi + 1.0;
      for (std::size_t k = 0; k < steps.size(); ++k) {
        if (p.edges[static_cast<std::size_t>(steps[k].edge)].full_circle() || origin(steps[k]) != v) continue;
        const double a = ccw_angle(out_tangent(steps[k]), back, normal);
        if (a < best) {
          best = a;
          next = k;
        }
      }
      if (next == steps.size())
        throw Error(ErrorKind::DegenerateConfiguration, "open face boundary on ball " + std::to_string(ball));
      if (used[next] && next != s)
        throw Error(ErrorKind::DegenerateConfiguration, "face boundary does not close on ball " + std::to_string(ball));
      cur = next;
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

}  // namespace detail

/// Drops redundant balls: a center survives iff its face has a 2-dimensional
/// part, which for two or more balls means it carries at least one edge.
inline CenterSet reduce(const CenterSet& c) {
  if (!has_interior(c)) throw Error(ErrorKind::NotBallPolyhedron);
  if (c.size() == 1) return c;
  const auto raw = detail::raw_structure(c);
  std::vector<bool> has_edge(c.size(), false);
  for (const auto& e : raw.edges) {
    has_edge[static_cast<std::size_t>(e.ball_a)] = true;
    has_edge[static_cast<std::size_t>(e.ball_b)] = true;
  }
  std::vector<int> keep;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (has_edge[i]) keep.push_back(static_cast<int>(i));
  return c.subset(keep);
}

/// Builds the boundary structure of B(C) for a reduced center set. In
/// `strict` mode a vertex on four or more spheres is rejected.
inline BallPolyhedron build(const CenterSet& c, bool strict = false) {
  if (!has_interior(c)) throw Error(ErrorKind::NotBallPolyhedron);
  BallPolyhedron p;
  p.centers = c;
  if (c.size() == 1) {
    p.faces.push_back(BPFace{0, {}, true});
    return p;
  }
  auto raw = detail::raw_structure(c);
  p.vertices = std::move(raw.vertices);
  p.edges = std::move(raw.edges);
  if (strict)
    for (const auto& v : p.vertices)
      if (v.balls.size() >= 4)
        throw Error(ErrorKind::DegenerateConfiguration, "vertex on " + std::to_string(v.balls.size()) + " spheres");

  p.faces.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    p.faces[i].ball = static_cast<int>(i);
    p.faces[i].cycles = detail::face_cycles(p, static_cast<int>(i));
    if (p.faces[i].cycles.empty()) throw Error(ErrorKind::NotReduced, "empty face for " + c.labels()[i]);
  }
  return p;
}

inline bool is_simple(const BallPolyhedron& p) {
  return std::all_of(p.vertices.begin(), p.vertices.end(),
                     [](const BPVertex& v) { return v.edges.size() == 3; });
}

/// Any two faces meet in nothing, one vertex or one edge, and any two edges
/// share at most one vertex. Fewer than four faces never qualify.
inline bool is_standard(const BallPolyhedron& p) {
  const std::size_t n = p.faces.size();
  if (n == 1 && p.edges.empty()) return true;
  if (n < 4) return false;
  const FaceLattice l = p.lattice();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<int> shared_edges;
      std::set_intersection(l.face_edges[i].begin(), l.face_edges[i].end(), l.face_edges[j].begin(),
                            l.face_edges[j].end(), std::back_inserter(shared_edges));
      std::vector<int> shared_vertices;
      std::set_intersection(l.face_vertices[i].begin(), l.face_vertices[i].end(),
                            l.face_vertices[j].begin(), l.face_vertices[j].end(),
                            std::back_inserter(shared_vertices));
      if (shared_edges.size() > 1) return false;
      if (shared_edges.empty()) {
        if (shared_vertices.size() > 1) return false;
      } else {
        const auto& ends = l.edge_vertices[static_cast<std::size_t>(shared_edges.front())];
        for (int v : shared_vertices)
          if (!ends.count(v)) return false;
      }
    }
  for (std::size_t a = 0; a < p.edges.size(); ++a)
    for (std::size_t b = a + 1; b < p.edges.size(); ++b) {
      std::vector<int> common;
      std::set_intersection(l.edge_vertices[a].begin(), l.edge_vertices[a].end(),
                            l.edge_vertices[b].begin(), l.edge_vertices[b].end(), std::back_inserter(common));
      if (common.size() > 1) return false;
    }
  return true;
}

/// Element correspondences between two face lattices.
struct LatticeMap {
  std::vector<int> vertex;
  std::vector<int> edge;
  std::vector<int> face;
};

/// Checks that `map` is an incidence-preserving bijection from `a` onto `b`.
inline bool verify_isomorphism(const FaceLattice& a, const FaceLattice& b, const LatticeMap& map) {
  if (a.vertex_count != b.vertex_count || a.edge_count != b.edge_count || a.face_count != b.face_count)
    return false;
  auto bijective = [](const std::vector<int>& m, std::size_t size) {
    if (m.size() != size) return false;
    std::vector<bool> hit(size, false);
    for (int x : m) {
      if (x < 0 || static_cast<std::size_t>(x) >= size || hit[static_cast<std::size_t>(x)]) return false;
      hit[static_cast<std::size_t>(x)] = true;
    }
    return true;
  };
  if (!bijective(map.vertex, a.vertex_count) || !bijective(map.edge, a.edge_count) ||
      !bijective(map.face, a.face_count))
    return false;
  for (std::size_t v = 0; v < a.vertex_count; ++v) {
    const int mv = map.vertex[v];
    for (std::size_t e = 0; e < a.edge_count; ++e)
      if (a.vertex_in_edge(static_cast<int>(v), static_cast<int>(e)) != b.vertex_in_edge(mv, map.edge[e]))
        return false;
    for (std::size_t f = 0; f < a.face_count; ++f)
      if (a.vertex_in_face(static_cast<int>(v), static_cast<int>(f)) != b.vertex_in_face(mv, map.face[f]))
        return false;
  }
  for (std::size_t e = 0; e < a.edge_count; ++e)
    for (std::size_t f = 0; f < a.face_count; ++f)
      if (a.edge_in_face(static_cast<int>(e), static_cast<int>(f)) != b.edge_in_face(map.edge[e], map.face[f]))
        return false;
  return true;
}

/// Order-reversing correspondence: vertices of `a` to faces of `b`, edges to
/// edges, faces of `a` to vertices of `b`.
struct DualLatticeMap {
  std::vector<int> vertex_to_face;
  std::vector<int> edge_to_edge;
  std::vector<int> face_to_vertex;
};

/// Checks that `map` is an order-reversing bijection, element by element.
inline bool verify_anti_isomorphism(const FaceLattice& a, const FaceLattice& b, const DualLatticeMap& map) {
  if (a.vertex_count != b.face_count || a.edge_count != b.edge_count || a.face_count != b.vertex_count)
    return false;
  auto bijective = [](const std::vector<int>& m, std::size_t size) {
    if (m.size() != size) return false;
    std::vector<bool> hit(size, false);
    for (int x : m) {
      if (x < 0 || static_cast<std::size_t>(x) >= size || hit[static_cast<std::size_t>(x)]) return false;
      hit[static_cast<std::size_t>(x)] = true;
    }
    return true;
  };
  if (!bijective(map.vertex_to_face, a.vertex_count) || !bijective(map.edge_to_edge, a.edge_count) ||
      !bijective(map.face_to_vertex, a.face_count))
    return false;
  for (std::size_t v = 0; v < a.vertex_count; ++v) {
    const int fv = map.vertex_to_face[v];
    for (std::size_t e = 0; e < a.edge_count; ++e)
      if (a.vertex_in_edge(static_cast<int>(v), static_cast<int>(e)) != b.edge_in_face(map.edge_to_edge[e], fv))
        return false;
    for (std::size_t f = 0; f < a.face_count; ++f)
      if (a.vertex_in_face(static_cast<int>(v), static_cast<int>(f)) != b.vertex_in_face(map.face_to_vertex[f], fv))
        return false;
  }
  for (std::size_t e = 0; e < a.edge_count; ++e)
    for (std::size_t f = 0; f < a.face_count; ++f)
      if (a.edge_in_face(static_cast<int>(e), static_cast<int>(f)) !=
          b.vertex_in_edge(map.face_to_vertex[f], map.edge_to_edge[e]))
        return false;
  return true;
}

/// Correspondence between a standard P and a polyhedron whose ball k is
/// centered at vertex k of P. Entries are -1 where no partner exists.
inline DualLatticeMap dual_correspondence(const BallPolyhedron& p, const BallPolyhedron& dual) {
  DualLatticeMap m;
  m.vertex_to_face.resize(p.vertices.size());
  for (std::size_t v = 0; v < p.vertices.size(); ++v)
    m.vertex_to_face[v] = v < dual.faces.size() ? static_cast<int>(v) : -1;
  const FaceLattice l = p.lattice();
  m.face_to_vertex.resize(p.faces.size());
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    std::vector<int> verts(l.face_vertices[f].begin(), l.face_vertices[f].end());
    m.face_to_vertex[f] = dual.find_vertex(verts);
  }
  m.edge_to_edge.resize(p.edges.size());
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    const auto& edge = p.edges[e];
    m.edge_to_edge[e] = edge.start < 0 || edge.start == edge.end ? -1 : dual.find_edge(edge.start, edge.end);
  }
  return m;
}

/// The dual ball-polyhedron B(vertices of P), with its order-reversing
/// lattice correspondence verified.
inline BallPolyhedron dual(const BallPolyhedron& p) {
  if (!is_standard(p)) throw Error(ErrorKind::Precondition, "dual requires a standard ball-polyhedron");
  std::vector<Point3> pts;
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < p.vertices.size(); ++v) {
    pts.push_back(p.vertices[v].position);
    labels.push_back("v" + std::to_string(v));
  }
  BallPolyhedron d;
  try {
    d = build(CenterSet(std::move(pts), std::move(labels), p.centers.tolerance()));
  } catch (const Error& e) {
    throw Error(ErrorKind::DualityCheckFailed, e.what());
  }
  if (!is_standard(d)) throw Error(ErrorKind::DualityCheckFailed, "dual is not standard");
  if (!verify_anti_isomorphism(p.lattice(), d.lattice(), dual_correspondence(p, d)))
    throw Error(ErrorKind::DualityCheckFailed, "face lattices are not anti-isomorphic");
  return d;
}

/// Isomorphism between P and a polyhedron whose faces are matched to P's by
/// `face_map`; vertices and edges are matched through their face labels.
inline std::optional<LatticeMap> induced_lattice_map(const BallPolyhedron& a, const BallPolyhedron& b,
                                                     const std::vector<int>& face_map) {
  LatticeMap m;
  m.face = face_map;
  for (const auto& v : a.vertices) {
    std::vector<int> balls;
    for (int x : v.balls) balls.push_back(face_map[static_cast<std::size_t>(x)]);
    std::sort(balls.begin(), balls.end());
    const int w = b.find_vertex(balls);
    if (w < 0) return std::nullopt;
    m.vertex.push_back(w);
  }
  for (const auto& e : a.edges) {
    const int f = b.find_edge(face_map[static_cast<std::size_t>(e.ball_a)], face_map[static_cast<std::size_t>(e.ball_b)]);
    if (f < 0) return std::nullopt;
    m.edge.push_back(f);
  }
  if (!verify_isomorphism(a.lattice(), b.lattice(), m)) return std::nullopt;
  return m;
}

}  // namespace ballpoly
