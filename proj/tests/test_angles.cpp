#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ballpoly/angles.hpp"
#include "support.hpp"

using namespace ballpoly;

namespace {

/// Inner dihedral angle from the two sphere tangent planes at x, measured
/// between tangent vectors orthogonal to the edge and pointing into the
/// respective faces.
double tangent_plane_wedge(const Point3& x, const Point3& ci, const Point3& cj) {
  const Vec3 ni = (x - ci).normalized(), nj = (x - cj).normalized();
  const Vec3 edge_dir = ni.cross(nj).normalized();
  // in-face directions: within each tangent plane, orthogonal to the edge,
  // pointing away from the other sphere's cap
  Vec3 ti = edge_dir.cross(ni), tj = nj.cross(edge_dir);
  if (ti.dot(nj) > 0) ti = -ti;
  if (tj.dot(ni) > 0) tj = -tj;
  return std::acos(std::clamp(ti.dot(tj), -1.0, 1.0));
}

}  // namespace

TEST(DihedralFromDistance, KnownValues) {
  EXPECT_NEAR(dihedral_from_distance(1.0), 2.0 * kPi / 3.0, 1e-15);
  EXPECT_NEAR(dihedral_from_distance(std::sqrt(2.0)), kPi / 2.0, 1e-15);
  EXPECT_NEAR(dihedral_from_distance(1e-9), kPi, 1e-8);
  EXPECT_NEAR(dihedral_from_distance(2.0 - 1e-12), 0.0, 1e-5);
  EXPECT_NEAR(distance_from_dihedral(dihedral_from_distance(1.3)), 1.3, 1e-12);
}

TEST(DihedralFromDistance, DomainErrors) {
  for (double d : {0.0, -0.1, 2.0, 2.5, std::nan("")}) {
    try {
      dihedral_from_distance(d);
      ADD_FAILURE() << d;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Domain);
    }
  }
  EXPECT_THROW(distance_from_dihedral(0.0), Error);
  EXPECT_THROW(distance_from_dihedral(kPi), Error);
}

TEST(DihedralFromDistance, AgreesWithArccosForm) {
  for (int i = 1; i < 200; ++i) {
    const double d = 2.0 * i / 200.0;
    EXPECT_NEAR(dihedral_from_distance(d), kPi - std::acos(1.0 - d * d / 2.0), 1e-7);
  }
}

TEST(InnerDihedral, TetraAndTangentPlaneOracle) {
  const auto p = build(testsupport::tetra());
  for (const auto& a : all_dihedrals(p)) EXPECT_NEAR(a.radians, 2.0 * kPi / 3.0, 1e-12);
  for (const auto& e : p.edges)
    EXPECT_NEAR(tangent_plane_wedge(e.arc.midpoint(), p.centers[static_cast<std::size_t>(e.ball_a)],
                                    p.centers[static_cast<std::size_t>(e.ball_b)]),
                2.0 * kPi / 3.0, 1e-9);
}

TEST(InnerDihedral, RightAngleEdge) {
  const auto p = build(CenterSet({{0, 0, 0}, {std::sqrt(2.0), 0, 0}}));
  EXPECT_NEAR(inner_dihedral(p, 0).radians, kPi / 2.0, 1e-12);
}

TEST(InnerDihedral, IndependentOfSamplePointAndMatchesClosedForm) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const auto inst = testsupport::random_standard_instance(rng);
    for (std::size_t e = 0; e < inst.p.edges.size(); ++e) {
      const auto& edge = inst.p.edges[e];
      const Point3& ci = inst.reduced[static_cast<std::size_t>(edge.ball_a)];
      const Point3& cj = inst.reduced[static_cast<std::size_t>(edge.ball_b)];
      const double closed = dihedral_from_distance((ci - cj).norm());
      EXPECT_NEAR(inner_dihedral(inst.p, static_cast<int>(e)).radians, closed, 1e-9);
      for (double s : {0.01, 0.3, 0.77, 0.99})
        EXPECT_NEAR(tangent_plane_wedge(edge.arc.point_at_fraction(s), ci, cj), closed, 1e-9);
    }
  }
}

TEST(InnerDihedral, InvariantUnderRigidMotions) {
  std::mt19937_64 rng(22);
  const auto inst = testsupport::random_standard_instance(rng);
  const auto moved = testsupport::transformed(inst.reduced, testsupport::random_isometry(rng, true));
  const auto a = all_dihedrals(inst.p);
  const auto pm = build(moved);
  ASSERT_EQ(pm.edges.size(), inst.p.edges.size());
  for (std::size_t e = 0; e < a.size(); ++e) {
    const auto& edge = inst.p.edges[e];
    const int f = pm.find_edge(edge.ball_a, edge.ball_b);
    ASSERT_GE(f, 0);
    EXPECT_NEAR(inner_dihedral(pm, f).radians, a[e].radians, 1e-9);
  }
}

TEST(FaceAngle, TetraAllEqualAndMatchTangentOracle) {
  const auto p = build(testsupport::tetra());
  const auto angles = all_face_angles(p);
  ASSERT_EQ(angles.size(), 12u);
  for (const auto& a : angles) EXPECT_NEAR(a.radians, angles.front().radians, 1e-9);
  // oracle: angle at the vertex between the two edge circles' tangents,
  // measured in the tangent plane of the face sphere
  const auto& a0 = angles.front();
  const auto& v = p.vertices[static_cast<std::size_t>(a0.vertex)];
  const Point3& c = p.centers[static_cast<std::size_t>(a0.face)];
  std::vector<Vec3> dirs;
  for (int e : v.edges) {
    const auto& edge = p.edges[static_cast<std::size_t>(e)];
    if (edge.ball_a != a0.face && edge.ball_b != a0.face) continue;
    // direction from the vertex into the edge: toward the arc's other end
    const Point3 other = p.vertices[static_cast<std::size_t>(edge.start == a0.vertex ? edge.end : edge.start)].position;
    const Vec3 n = (v.position - c).normalized();
    Vec3 t = edge.arc.circle.normal.cross(v.position - edge.arc.circle.center).normalized();
    if (t.dot(other - v.position) < 0) t = -t;
    dirs.push_back((t - t.dot(n) * n).normalized());
  }
  ASSERT_EQ(dirs.size(), 2u);
  const double oracle = std::acos(std::clamp(dirs[0].dot(dirs[1]), -1.0, 1.0));
  EXPECT_NEAR(a0.radians, oracle, 1e-9);
  // spherical triangle angles exceed the planar 60 degrees
  EXPECT_GT(a0.radians, kPi / 3.0);
  EXPECT_LT(a0.radians, kPi);
}

TEST(FaceAngle, PerturbedTetraChangesAnglesKeepsLattice) {
  auto pts = testsupport::tetra_points(1.0);
  pts[0] += Vec3(0.03, -0.02, 0.01);
  const auto p = build(CenterSet(pts));
  EXPECT_EQ(p.f_vector(), (std::array<std::size_t, 3>{4, 6, 4}));
  EXPECT_TRUE(is_standard(p));
  const auto angles = all_face_angles(p);
  double lo = 10, hi = -10;
  for (const auto& a : angles) {
    lo = std::min(lo, a.radians);
    hi = std::max(hi, a.radians);
  }
  EXPECT_GT(hi - lo, 1e-3);
}

TEST(FaceAngle, SumExceedsPiOnSphericalTriangles) {
  // Gauss-Bonnet on each triangular face: angle sum = pi + area - geodesic
  // curvature term, in particular > pi for faces of small balls
  std::mt19937_64 rng(23);
  const auto inst = testsupport::random_standard_instance(rng);
  const auto angles = all_face_angles(inst.p);
  for (const auto& a : angles) {
    EXPECT_GT(a.radians, 0.0);
    EXPECT_LT(a.radians, kTwoPi);
  }
}
