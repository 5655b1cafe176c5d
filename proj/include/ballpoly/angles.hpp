#pragma once

#include <cmath>
#include <vector>

#include "ballpoly/ball_polyhedron.hpp"

namespace ballpoly {

struct DihedralAngle {
  int edge = -1;
  double radians = 0.0;
};

struct FaceAngle {
  int vertex = -1;
  int face = -1;
  double radians = 0.0;
};

/// Inner dihedral angle of an edge whose balls have centers `d` apart.
/// Equals pi - arccos(1 - d^2/2); evaluated as 2 atan2(sqrt(1 - d^2/4), d/2)
/// which stays accurate near both ends of (0, 2).
inline double dihedral_from_distance(double d) {
  if (!(d > 0.0 && d < 2.0)) throw Error(ErrorKind::Domain, "center distance must lie in (0, 2)");
  return 2.0 * std::atan2(std::sqrt(1.0 - 0.25 * d * d), 0.5 * d);
}

inline double distance_from_dihedral(double alpha) {
  if (!(alpha > 0.0 && alpha < kPi)) throw Error(ErrorKind::Domain, "dihedral angle must lie in (0, pi)");
  return 2.0 * std::cos(0.5 * alpha);
}

/// Wedge angle of the two supporting half-spaces of the unit balls around
/// `ci` and `cj` at the boundary point `p`.
inline double supporting_wedge_angle(const Point3& p, const Point3& ci, const Point3& cj) {
  const Vec3 ni = p - ci;
  const Vec3 nj = p - cj;
  return kPi - std::atan2(ni.cross(nj).norm(), ni.dot(nj));
}

/// Inner dihedral angle of edge `e`, measured geometrically at three interior
/// points of the arc and cross-checked against the closed form.
inline DihedralAngle inner_dihedral(const BallPolyhedron& p, int e) {
  const auto& edge = p.edges.at(static_cast<std::size_t>(e));
  if (edge.arc.circle.radius == 0.0) throw Error(ErrorKind::TangentialEdge);
  const Point3& ci = p.centers[static_cast<std::size_t>(edge.ball_a)];
  const Point3& cj = p.centers[static_cast<std::size_t>(edge.ball_b)];
  double lo = kTwoPi, hi = -kTwoPi, sum = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const double a = supporting_wedge_angle(edge.arc.point_at_fraction(s), ci, cj);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    sum += a;
  }
  const double measured = sum / 3.0;
  const double closed = dihedral_from_distance((ci - cj).norm());
  if (hi - lo > 1e-7 || std::abs(measured - closed) > 1e-7)
    throw Error(ErrorKind::Internal, "dihedral angle disagrees with the distance formula");
  return {e, measured};
}

inline std::vector<DihedralAngle> all_dihedrals(const BallPolyhedron& p) {
  std::vector<DihedralAngle> out;
  for (std::size_t e = 0; e < p.edges.size(); ++e) out.push_back(inner_dihedral(p, static_cast<int>(e)));
  return out;
}

/// Angle of face `f` at vertex `v`, measured inside the face from the
/// outgoing edge tangent counterclockwise (seen from outside) to the reversed
/// incoming tangent. Lies in (0, 2pi).
inline FaceAngle face_angle(const BallPolyhedron& p, int v, int f) {
  const auto& face = p.faces.at(static_cast<std::size_t>(f));
  const auto& vertex = p.vertices.at(static_cast<std::size_t>(v));
  if (!std::binary_search(vertex.balls.begin(), vertex.balls.end(), face.ball))
    throw Error(ErrorKind::Precondition, "vertex is not on the face");
  const CycleStep* incoming = nullptr;
  const CycleStep* outgoing = nullptr;
  int count = 0;
  for (const auto& cycle : face.cycles)
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const auto& e = p.edges[static_cast<std::size_t>(cycle[k].edge)];
      if (e.full_circle()) continue;
      const int origin = cycle[k].forward ? e.start : e.end;
      const int dest = cycle[k].forward ? e.end : e.start;
      if (origin == v) {
        ++count;
        outgoing = &cycle[k];
      }
      if (dest == v) {
        ++count;
        incoming = &cycle[k];
      }
    }
  if (count != 2 || !incoming || !outgoing)
    throw Error(ErrorKind::Precondition, "face angle needs exactly two edges of the face at the vertex");
  const auto& ein = p.edges[static_cast<std::size_t>(incoming->edge)].arc;
  const auto& eout = p.edges[static_cast<std::size_t>(outgoing->edge)].arc;
  const Vec3 t_in = p.edge_tangent(*incoming, incoming->forward ? ein.theta_end : ein.theta_start);
  const Vec3 t_out = p.edge_tangent(*outgoing, outgoing->forward ? eout.theta_start : eout.theta_end);
  const Vec3 normal = vertex.position - p.centers[static_cast<std::size_t>(face.ball)];
  return {v, f, ccw_angle(t_out, -t_in, normal)};
}

inline std::vector<FaceAngle> all_face_angles(const BallPolyhedron& p) {
  std::vector<FaceAngle> out;
  for (std::size_t v = 0; v < p.vertices.size(); ++v)
    for (int b : p.vertices[v].balls) out.push_back(face_angle(p, static_cast<int>(v), b));
  return out;
}

}  // namespace ballpoly
