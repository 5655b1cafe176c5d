#include <random>

#include <gtest/gtest.h>

#include "ballpoly/truncated.hpp"
#include "support.hpp"

using namespace ballpoly;

namespace {

struct Chain {
  CenterSet c;
  BallPolyhedron p;
  VoronoiComplex vc;
  DelaunayComplex d;
  TruncatedDelaunayComplex t;
};

Chain chain(const CenterSet& input) {
  Chain ch;
  ch.c = reduce(input);
  ch.p = build(ch.c);
  ch.vc = build_voronoi(ch.c.points(), ch.c.tolerance());
  ch.d = delaunay_from_voronoi(ch.vc, ch.c.tolerance());
  ch.t = build_truncated_delaunay(ch.c, ch.vc, ch.d);
  return ch;
}

/// Five centers whose Delaunay complex has three tetrahedra, only two of
/// which survive truncation.
CenterSet dropped_cell_set() {
  return CenterSet({{-0.27595500243668669, 0.080506732645203194, 0.019808810138009642},
                    {0.21090378716116304, -0.095755141102435715, -0.013785242757305562},
                    {-0.027458715453787363, 0.31159277776862121, -0.011448226920870695},
                    {-0.17066783512065098, 0.27162978291676626, -0.013720286322086269},
                    {-0.27760257123679888, 0.12937800037175357, -0.017875398305407415}});
}

}  // namespace

TEST(TruncatedDelaunay, TetraKeepsEveryCell) {
  const auto ch = chain(testsupport::tetra());
  EXPECT_EQ(ch.t.members.size(), ch.d.cells.size());
  EXPECT_TRUE(ch.t.degenerate.empty());
  const auto q = extract_Q(ch.t);
  EXPECT_EQ(q.cells.size(), 1u);
  EXPECT_EQ(q.boundary_f_vector(), (std::array<std::size_t, 3>{4, 6, 4}));
  EXPECT_TRUE(q.interior_faces.empty());
}

TEST(TruncatedDelaunay, WitnessLiesOnCoFeatureInsideTheBalls) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 10; ++k) {
    const auto ch = chain(testsupport::random_standard_instance(rng).reduced);
    const auto& pts = ch.c.points();
    for (const auto& m : ch.t.members) {
      EXPECT_LT(m.witness_radius, 1.0);
      for (int s : m.sites)
        EXPECT_NEAR((m.witness - pts[static_cast<std::size_t>(s)]).norm(), m.witness_radius, 1e-9);
      for (const auto& x : pts) EXPECT_LE((m.witness - x).norm(), m.witness_radius + 1e-9);
    }
  }
}

TEST(TruncatedDelaunay, DropsFarThreeCell) {
  const auto ch = chain(dropped_cell_set());
  ASSERT_EQ(ch.c.size(), 5u);
  EXPECT_EQ(ch.d.cells_of_dimension(3).size(), 3u);
  EXPECT_EQ(ch.t.count(3), 2u);
  // the dropped cell's circumcenter is farther than 1 from its sites
  for (int i : ch.d.cells_of_dimension(3)) {
    const auto& s = ch.d.cells[static_cast<std::size_t>(i)].sites;
    const auto& p = ch.c.points();
    const auto sph = circumsphere(p[static_cast<std::size_t>(s[0])], p[static_cast<std::size_t>(s[1])],
                                  p[static_cast<std::size_t>(s[2])], p[static_cast<std::size_t>(s[3])]);
    ASSERT_TRUE(sph);
    EXPECT_EQ(ch.t.find(s) >= 0, sph->radius < 1.0);
  }
  const auto q = extract_Q(ch.t);
  EXPECT_EQ(q.cells.size(), 2u);
  EXPECT_EQ(q.interior_faces.size(), 1u);
  EXPECT_TRUE(check_subcomplex(ch.t, ch.d, 1e-9).passed());
  EXPECT_TRUE(check_boundary_triangles(q, ch.p).passed());
  EXPECT_TRUE(check_nerve_isomorphism(q, ch.p).passed());
}

TEST(TruncatedDelaunay, LargeCoSphericalTetraHasNoThreeCell) {
  // regular tetrahedron with circumradius about 1.10
  const CenterSet c(testsupport::tetra_points(1.8));
  const auto vc = build_voronoi(c.points());
  const auto d = delaunay_from_voronoi(vc);
  const auto t = build_truncated_delaunay(c, vc, d);
  EXPECT_EQ(t.count(3), 0u);
  try {
    extract_Q(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoThreeCell);
  }
}

TEST(PolyhedronQ, OctahedralBoundaryIsSphere) {
  const auto ch = chain(testsupport::octahedral());
  const auto q = extract_Q(ch.t);
  const auto f = q.boundary_f_vector();
  EXPECT_EQ(static_cast<long>(f[0]) - static_cast<long>(f[1]) + static_cast<long>(f[2]), 2);
  EXPECT_EQ(q.boundary_vertices, q.vertices);
  EXPECT_TRUE(check_no_boundary_vertex(ch.vc, ch.p).passed());
  EXPECT_TRUE(check_subcomplex(ch.t, ch.d, 1e-9).passed());
  EXPECT_TRUE(check_boundary_triangles(q, ch.p).passed());
  EXPECT_TRUE(check_nerve_isomorphism(q, ch.p).passed());
}

TEST(PolyhedronQ, ChecksHoldOnRandomStandardInstances) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 25; ++k) {
    const auto ch = chain(testsupport::random_standard_instance(rng).reduced);
    if (!ch.t.degenerate.empty()) continue;
    const auto q = extract_Q(ch.t);
    EXPECT_TRUE(check_no_boundary_vertex(ch.vc, ch.p).passed());
    EXPECT_TRUE(check_subcomplex(ch.t, ch.d, 1e-9).passed());
    EXPECT_TRUE(check_boundary_triangles(q, ch.p).passed());
    const auto nerve = check_nerve_isomorphism(q, ch.p);
    EXPECT_TRUE(nerve.passed());
    // vertex set of Q is C and boundary triangles count the vertices of P
    std::vector<int> all(ch.c.size());
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(q.vertices, all);
    EXPECT_EQ(q.boundary_faces.size(), ch.p.vertices.size());
    EXPECT_EQ(q.boundary_edges.size(), ch.p.edges.size());
  }
}

TEST(PolyhedronQ, NonSimpleInputSkipsChecks) {
  const double r = 0.3;
  const auto ch = chain(CenterSet({{r, 0, 0}, {0, r, 0}, {-r, 0, 0}, {0, -r, 0}, {0, 0, 0.2}}));
  ASSERT_FALSE(is_simple(ch.p));
  EXPECT_TRUE(check_no_boundary_vertex(ch.vc, ch.p).skipped);
  PolyhedronQ empty;
  EXPECT_TRUE(check_boundary_triangles(empty, ch.p).skipped);
  EXPECT_TRUE(check_nerve_isomorphism(empty, ch.p).skipped);
}

TEST(PolyhedronQ, CorruptedBoundaryIsCaught) {
  const auto ch = chain(testsupport::octahedral());
  auto q = extract_Q(ch.t);
  ASSERT_TRUE(check_boundary_triangles(q, ch.p).passed());
  q.boundary_faces.pop_back();
  EXPECT_FALSE(check_boundary_triangles(q, ch.p).passed());
  const auto nerve = check_nerve_isomorphism(q, ch.p);
  EXPECT_FALSE(nerve.passed());
  EXPECT_FALSE(nerve.sphere.closed);
}

TEST(PolyhedronQ, ExtraMemberBreaksSubcomplex) {
  auto ch = chain(testsupport::tetra());
  ch.t.members.push_back({-1, {0, 1, 2, 3, 7}, 3, Point3::Zero(), 0.5});
  EXPECT_FALSE(check_subcomplex(ch.t, ch.d, 1e-9).passed());
}

TEST(Nerve, SingleBallIsAPoint) {
  const auto p = build(CenterSet({{0, 0, 0}}));
  const auto n = nerve_of_faces(p);
  EXPECT_EQ(n.dimension(), 0);
  EXPECT_EQ(n.euler_characteristic(), 1);
}

TEST(Nerve, TetraIsBoundaryOfSimplex) {
  const auto n = nerve_of_faces(build(testsupport::tetra()));
  EXPECT_EQ(n.of_dimension(2).size(), 4u);
  EXPECT_EQ(n.euler_characteristic(), 2);
  EXPECT_TRUE(check_two_sphere(n).is_sphere());
}

TEST(SphereCheck, TorusIsNotASphere) {
  // 7-vertex torus
  std::vector<Simplex> tris;
  for (int i = 0; i < 7; ++i) {
    tris.push_back({i, (i + 1) % 7, (i + 3) % 7});
    tris.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  const auto s = check_two_sphere(SimplicialComplex::generated_by(tris));
  EXPECT_TRUE(s.closed);
  EXPECT_EQ(s.euler, 0);
  EXPECT_FALSE(s.is_sphere());
}
