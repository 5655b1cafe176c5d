#include <random>

#include <gtest/gtest.h>

#include "ballpoly/io.hpp"
#include "ballpoly/pipeline.hpp"
#include "support.hpp"

using namespace ballpoly;

TEST(Certify, Tetra) {
  const auto cert = certify(testsupport::tetra());
  EXPECT_TRUE(cert.certified());
  EXPECT_EQ(cert.verdict, kCertifiedVerdict);
  EXPECT_TRUE(cert.has_interior && cert.reduced && cert.simple && cert.standard);
  EXPECT_EQ(cert.f_vector, (std::array<std::size_t, 3>{4, 6, 4}));
  ASSERT_EQ(cert.dihedrals.size(), 6u);
  for (const auto& a : cert.dihedrals) EXPECT_NEAR(a.radians, 2.0 * kPi / 3.0, 1e-12);
  for (const Check* c : {&cert.voronoi_delaunay_correspondence, &cert.no_boundary_voronoi_vertex, &cert.subcomplex,
                         &cert.boundary_triangle_bijection, &cert.nerve_isomorphism, &cert.two_sphere,
                         &cert.weakly_convex, &cert.codecomposable}) {
    EXPECT_TRUE(c->evaluated);
    EXPECT_TRUE(c->passed);
  }
  EXPECT_TRUE(cert.rigidity.rigid);
  EXPECT_EQ(cert.rigidity.joints, 4u);
  EXPECT_EQ(cert.rigidity.bars, 6u);
  EXPECT_EQ(cert.rigidity.nullity, 6);
  EXPECT_TRUE(cert.failures.empty());
}

TEST(Certify, RedundantInputIsReducedFirst) {
  const auto cert =
      certify(CenterSet({{0, 0, 0}, {0.1, 0, 0}, {0, 0.1, 0}, {0, 0, 0.1}, {0.025, 0.025, 0.025}}));
  EXPECT_EQ(cert.input_count, 5u);
  EXPECT_EQ(cert.reduced_count, 4u);
  EXPECT_TRUE(cert.reduced);
  EXPECT_TRUE(cert.certified());
}

TEST(Certify, LensIsNotStandard) {
  const auto cert = certify(CenterSet({{-0.4, 0, 0}, {0.4, 0, 0}, {0, 0.5, 0.05}}));
  EXPECT_EQ(cert.status, Status::HypothesesNotMet);
  EXPECT_EQ(cert.verdict, "hypotheses not met: standard=false");
  EXPECT_FALSE(cert.rigidity.evaluated);
}

TEST(Certify, EmptyInterior) {
  const auto cert = certify(CenterSet({{-1.2, 0, 0}, {1.2, 0, 0}}));
  EXPECT_EQ(cert.status, Status::HypothesesNotMet);
  EXPECT_EQ(cert.verdict, "not a ball-polyhedron");
}

TEST(Certify, NonSimple) {
  const double r = 0.3;
  const auto cert = certify(CenterSet({{r, 0, 0}, {0, r, 0}, {-r, 0, 0}, {0, -r, 0}, {0, 0, 0.2}}));
  EXPECT_EQ(cert.status, Status::HypothesesNotMet);
  EXPECT_EQ(cert.verdict.rfind("hypotheses not met: simple=false", 0), 0u);
}

TEST(Certify, OctahedralMergedVertexIsNoted) {
  const auto cert = certify(testsupport::octahedral());
  EXPECT_TRUE(cert.certified());
  EXPECT_FALSE(cert.notes.empty());
}

TEST(Certify, RandomStandardInstancesCertify) {
  std::mt19937_64 rng(71);
  int certified = 0;
  for (int k = 0; k < 20; ++k) {
    const auto cert = certify(testsupport::random_standard_instance(rng).reduced);
    EXPECT_NE(cert.status, Status::HypothesesNotMet) << cert.verdict;
    certified += cert.certified();
  }
  EXPECT_EQ(certified, 20);
}

TEST(Certify, DeterministicOutput) {
  const auto c = testsupport::octahedral();
  EXPECT_EQ(certificate_json(certify(c)).dump(2), certificate_json(certify(c)).dump(2));
  EXPECT_EQ(input_hash(c), input_hash(testsupport::octahedral()));
  EXPECT_NE(input_hash(c), input_hash(testsupport::tetra()));
}

TEST(Compare, IsometricCopyIsCongruent) {
  std::mt19937_64 rng(72);
  const auto inst = testsupport::random_standard_instance(rng);
  for (bool reflect : {false, true}) {
    const auto moved = testsupport::transformed(inst.reduced, testsupport::random_isometry(rng, reflect));
    const auto r = compare(inst.reduced, moved);
    EXPECT_TRUE(r.isomorphic);
    EXPECT_TRUE(r.congruent);
    EXPECT_LE(r.rms, 1e-9);
    EXPECT_LE(r.dihedral_max_deviation, 1e-9);
    EXPECT_LE(r.hausdorff_max, 1e-9);
  }
}

TEST(Compare, ScaledTetraHasKnownDihedralDeviation) {
  const auto r = compare(testsupport::tetra(1.1), testsupport::tetra(1.0));
  EXPECT_TRUE(r.isomorphic);
  EXPECT_FALSE(r.congruent);
  EXPECT_NEAR(r.dihedral_max_deviation, std::abs(dihedral_from_distance(1.1) - dihedral_from_distance(1.0)), 1e-12);
  EXPECT_GT(r.hausdorff_max, 1e-3);
  EXPECT_EQ(r.isomorphisms_examined, 24u);
}

TEST(Compare, DifferentLatticesRejected) {
  try {
    compare(testsupport::octahedral(), testsupport::tetra());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoLatticeIsomorphism);
  }
  EXPECT_THROW(compare(CenterSet({{-0.4, 0, 0}, {0.4, 0, 0}, {0, 0.5, 0.05}}), testsupport::tetra()), Error);
}

TEST(DistanceToFace, ZeroOnFaceAndPositiveOff) {
  const auto p = build(testsupport::tetra());
  const auto samples = face_samples(p, 2);
  for (std::size_t f = 0; f < samples.size(); ++f)
    for (const auto& x : samples[f]) EXPECT_NEAR(distance_to_face(p, static_cast<int>(f), x), 0.0, 1e-12);
  EXPECT_NEAR(distance_to_face(p, 0, p.centers[0] + 1.5 * (p.vertices[0].position - p.centers[0]).normalized()), 0.5,
              1e-12);
}

TEST(Probe, ZeroMagnitudeLeavesInputUnchanged) {
  const auto r = perturbation_probe(testsupport::tetra(), 3, 0.0, 5);
  ASSERT_EQ(r.trials.size(), 3u);
  for (const auto& t : r.trials) {
    EXPECT_EQ(t.perturbation_norm, 0.0);
    EXPECT_LE(t.initial_residual, 1e-12);
    EXPECT_LE(t.rms_to_original, 1e-12);
  }
  EXPECT_EQ(r.congruent_trials, 3u);
}

TEST(Probe, SmallPerturbationsReturnToCongruence) {
  const auto r = perturbation_probe(testsupport::octahedral(), 5, 1e-3, 9);
  EXPECT_EQ(r.congruent_trials, 5u);
  EXPECT_LE(r.max_final_residual, 1e-12);
  for (const auto& t : r.trials) {
    EXPECT_NEAR(t.perturbation_norm, 1e-3, 1e-15);
    EXPECT_GT(t.initial_residual, 0.0);
  }
  const auto again = perturbation_probe(testsupport::octahedral(), 5, 1e-3, 9);
  EXPECT_EQ(probe_json(r).dump(), probe_json(again).dump());
}

TEST(Probe, RequiresCertifiedInput) {
  const double r = 0.3;
  try {
    perturbation_probe(CenterSet({{r, 0, 0}, {0, r, 0}, {-r, 0, 0}, {0, -r, 0}, {0, 0, 0.2}}), 2, 1e-3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
  EXPECT_THROW(perturbation_probe(testsupport::tetra(), -1, 1e-3, 1), std::invalid_argument);
}
