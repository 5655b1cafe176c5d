#pragma once

// End-to-end certification of local rigidity, congruence comparison of two
// center sets, and the perturbation probe.

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ballpoly/angles.hpp"
#include "ballpoly/ball_polyhedron.hpp"
#include "ballpoly/mesh.hpp"
#include "ballpoly/rigidity.hpp"
#include "ballpoly/truncated.hpp"
#include "ballpoly/voronoi.hpp"

namespace ballpoly {

inline constexpr const char* kCertifiedVerdict = "locally rigid certified";

enum class Status { Certified, HypothesesNotMet, Degenerate };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Certified: return "certified";
    case Status::HypothesesNotMet: return "hypotheses not met";
    case Status::Degenerate: return "degenerate";
  }
  return "unknown";
}

struct Check {
  bool evaluated = false;
  bool passed = false;
  std::string detail;
};

struct EdgeAngle {
  std::string ball_a, ball_b;
  double radians = 0.0;
};

struct QStatistics {
  std::array<std::size_t, 4> delaunay_cells{};   // by dimension
  std::array<std::size_t, 4> truncated_cells{};  // by dimension
  std::size_t q_cells = 0;
  std::size_t interior_faces = 0;
  std::array<std::size_t, 3> boundary_f_vector{};
  double volume = 0.0;
  double hull_volume = 0.0;
};

struct RigiditySummary {
  bool evaluated = false;
  std::size_t joints = 0;
  std::size_t bars = 0;
  int rank = 0;
  int nullity = 0;
  bool rigid = false;
  bool ill_conditioned = false;
  double threshold = 0.0;
  double smallest_kept_singular_value = 0.0;
  double largest_trivial_residual = 0.0;  // trivial motions pushed through the matrix
};

struct RigidityCertificate {
  std::string input_hash;
  std::size_t input_count = 0;
  std::size_t reduced_count = 0;
  std::vector<std::string> reduced_labels;

  bool has_interior = false;
  bool reduced = false;
  bool simple = false;
  bool standard = false;
  std::array<std::size_t, 3> f_vector{};
  std::vector<EdgeAngle> dihedrals;

  QStatistics q;
  Check voronoi_delaunay_correspondence;
  Check no_boundary_voronoi_vertex;
  Check subcomplex;
  Check boundary_triangle_bijection;
  Check nerve_isomorphism;
  Check two_sphere;
  Check weakly_convex;
  Check codecomposable;
  RigiditySummary rigidity;

  std::vector<std::string> failures;
  /// Handled special positions, such as co-spherical sites merged into one
  /// Voronoi vertex.
  std::vector<std::string> notes;
  Status status = Status::HypothesesNotMet;
  std::string verdict;

  bool certified() const { return status == Status::Certified; }
};

/// FNV-1a over the centers at 17 significant digits, the labels and the
/// tolerances.
inline std::string input_hash(const CenterSet& c) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
  };
  char buf[96];
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g;", c[i].x(), c[i].y(), c[i].z());
    feed(buf);
    feed(c.labels()[i] + ";");
  }
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", c.tolerance().eps_geom, c.tolerance().eps_rank);
  feed(buf);
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
  return buf;
}

namespace detail {

inline Check make_check(const LemmaReport& r) {
  Check c;
  c.evaluated = !r.skipped;
  c.passed = r.passed();
  if (r.skipped) c.detail = r.skip_reason;
  else if (!r.violations.empty()) c.detail = r.violations.front();
  return c;
}

inline bool is_degenerate_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::CoincidentCenters:
    case ErrorKind::DegenerateTriple:
    case ErrorKind::DegenerateConfiguration:
    case ErrorKind::TangentialEdge:
    case ErrorKind::DegenerateSpan:
    case ErrorKind::Internal: return true;
    default: return false;
  }
}

inline void run_certification(const CenterSet& input, RigidityCertificate& cert) {
  cert.has_interior = has_interior(input);
  if (!cert.has_interior) {
    cert.status = Status::HypothesesNotMet;
    cert.verdict = "not a ball-polyhedron";
    return;
  }
  const CenterSet c = reduce(input);
  cert.reduced = true;
  cert.reduced_count = c.size();
  cert.reduced_labels = c.labels();

  const BallPolyhedron p = build(c);
  cert.f_vector = p.f_vector();
  cert.simple = is_simple(p);
  cert.standard = is_standard(p);
  for (const auto& a : all_dihedrals(p)) {
    const auto& e = p.edges[static_cast<std::size_t>(a.edge)];
    cert.dihedrals.push_back({c.labels()[static_cast<std::size_t>(e.ball_a)],
                              c.labels()[static_cast<std::size_t>(e.ball_b)], a.radians});
  }
  if (!cert.simple || !cert.standard) {
    std::string which;
    if (!cert.simple) which += "simple=false";
    if (!cert.standard) which += std::string(which.empty() ? "" : ", ") + "standard=false";
    cert.status = Status::HypothesesNotMet;
    cert.verdict = "hypotheses not met: " + which;
    return;
  }

  const Tolerance& tol = c.tolerance();
  const VoronoiComplex vc = build_voronoi(c.points(), tol);
  const DelaunayComplex d = delaunay_from_voronoi(vc, tol);
  for (const auto& cell : d.cells) ++cert.q.delaunay_cells[static_cast<std::size_t>(cell.dimension)];
  {
    const auto r = check_feature_correspondence(vc, d, tol);
    cert.voronoi_delaunay_correspondence.evaluated = true;
    cert.voronoi_delaunay_correspondence.passed = r.passed();
    if (!r.violations.empty()) cert.voronoi_delaunay_correspondence.detail = r.violations.front();
    for (const auto& s : r.degenerate) cert.notes.push_back("merged special-position feature: " + s);
  }
  cert.no_boundary_voronoi_vertex = make_check(check_no_boundary_vertex(vc, p));

  const TruncatedDelaunayComplex t = build_truncated_delaunay(c, vc, d);
  for (const auto& s : t.degenerate) cert.failures.push_back("degenerate truncated cell: " + s);
  for (const auto& m : t.members) ++cert.q.truncated_cells[static_cast<std::size_t>(m.dimension)];
  cert.subcomplex = make_check(check_subcomplex(t, d, tol.eps_geom));

  const PolyhedronQ q = extract_Q(t, tol.eps_geom);
  cert.q.q_cells = q.cells.size();
  cert.q.interior_faces = q.interior_faces.size();
  cert.q.boundary_f_vector = q.boundary_f_vector();
  cert.boundary_triangle_bijection = make_check(check_boundary_triangles(q, p));
  {
    const auto r = check_nerve_isomorphism(q, p);
    cert.nerve_isomorphism.evaluated = !r.skipped;
    cert.nerve_isomorphism.passed = !r.skipped && r.isomorphic;
    cert.two_sphere.evaluated = !r.skipped;
    cert.two_sphere.passed = !r.skipped && r.sphere.is_sphere();
    if (r.skipped) cert.nerve_isomorphism.detail = cert.two_sphere.detail = r.skip_reason;
    else if (!r.violations.empty()) cert.nerve_isomorphism.detail = r.violations.front();
  }
  cert.weakly_convex.evaluated = true;
  cert.weakly_convex.passed = check_weakly_convex(q, tol.eps_geom);
  cert.codecomposable.evaluated = true;
  try {
    const auto co = check_codecomposable(q, d, tol.eps_geom);
    cert.codecomposable.passed = co.ok;
    cert.q.volume = co.volume_q;
    cert.q.hull_volume = co.volume_hull;
  } catch (const Error& e) {
    cert.codecomposable.passed = false;
    cert.codecomposable.detail = e.what();
  }

  const Framework f = boundary_framework(q);
  const RigidityResult rr = is_infinitesimally_rigid(f, tol);
  auto& rs = cert.rigidity;
  rs.evaluated = true;
  rs.joints = f.points.size();
  rs.bars = f.edges.size();
  rs.rank = rr.data.rank;
  rs.nullity = rr.data.nullity;
  rs.rigid = rr.rigid;
  rs.ill_conditioned = rr.data.ill_conditioned;
  rs.threshold = rr.data.threshold;
  if (rr.data.rank > 0) rs.smallest_kept_singular_value = rr.data.singular_values[rr.data.rank - 1];
  rs.largest_trivial_residual = (rr.data.matrix * trivial_motions(f.points)).cwiseAbs().maxCoeff();

  const std::vector<std::pair<const char*, const Check*>> checks = {
      {"voronoi-delaunay correspondence", &cert.voronoi_delaunay_correspondence},
      {"no boundary Voronoi vertex", &cert.no_boundary_voronoi_vertex},
      {"subcomplex", &cert.subcomplex},
      {"boundary triangle bijection", &cert.boundary_triangle_bijection},
      {"nerve isomorphism", &cert.nerve_isomorphism},
      {"2-sphere", &cert.two_sphere},
      {"weakly convex", &cert.weakly_convex},
      {"co-decomposable", &cert.codecomposable}};
  std::vector<std::string> failed;
  for (const auto& [name, check] : checks)
    if (!check->evaluated || !check->passed) failed.push_back(name);

  if (!t.degenerate.empty() || rs.ill_conditioned) {
    cert.status = Status::Degenerate;
    cert.verdict = rs.ill_conditioned ? "degenerate: rigidity matrix ill-conditioned"
                                      : "degenerate: truncated complex not classifiable";
    return;
  }
  if (!failed.empty()) {
    std::string which;
    for (const auto& s : failed) which += (which.empty() ? "" : ", ") + s;
    cert.status = Status::HypothesesNotMet;
    cert.verdict = "not certified: failed " + which;
    return;
  }
  if (!rs.rigid) {
    cert.status = Status::HypothesesNotMet;
    cert.verdict = "not certified: boundary of Q infinitesimally flexible (nullity " + std::to_string(rs.nullity) + ")";
    return;
  }
  cert.status = Status::Certified;
  cert.verdict = kCertifiedVerdict;
}

}  // namespace detail

/// Runs the whole chain on C. Failures are recorded in the certificate, not
/// thrown.
inline RigidityCertificate certify(const CenterSet& c) {
  RigidityCertificate cert;
  cert.input_hash = input_hash(c);
  cert.input_count = c.size();
  try {
    detail::run_certification(c, cert);
  } catch (const Error& e) {
    cert.failures.push_back(e.what());
    if (e.kind() == ErrorKind::NotBallPolyhedron) {
      cert.status = Status::HypothesesNotMet;
      cert.verdict = "not a ball-polyhedron";
    } else {
      cert.status = detail::is_degenerate_kind(e.kind()) ? Status::Degenerate : Status::HypothesesNotMet;
      cert.verdict = std::string(cert.status == Status::Degenerate ? "degenerate: " : "not certified: ") +
                     to_string(e.kind());
    }
  }
  return cert;
}

/// Q for a reduced copy of C, without the hypothesis checks.
inline PolyhedronQ polyhedron_q(const CenterSet& c) {
  const CenterSet r = reduce(c);
  const VoronoiComplex vc = build_voronoi(r.points(), r.tolerance());
  const DelaunayComplex d = delaunay_from_voronoi(vc, r.tolerance());
  return extract_Q(build_truncated_delaunay(r, vc, d), r.tolerance().eps_geom);
}

// ---------------------------------------------------------------------------
// congruence

/// Distance from x to the spherical face of P on ball f.
inline double distance_to_face(const BallPolyhedron& p, int f, const Point3& x) {
  const Point3& c = p.centers[static_cast<std::size_t>(f)];
  const Vec3 r = x - c;
  const double len = r.norm();
  if (len == 0.0) return 1.0;
  const Point3 y = c + r / len;
  bool inside = true;
  for (std::size_t k = 0; k < p.centers.size(); ++k)
    if (static_cast<int>(k) != f && (y - p.centers[k]).norm() > 1.0 + p.centers.tolerance().eps_geom) {
      inside = false;
      break;
    }
  if (inside || p.faces[static_cast<std::size_t>(f)].whole_sphere) return std::abs(len - 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& cycle : p.faces[static_cast<std::size_t>(f)].cycles)
    for (const auto& step : cycle) {
      const Arc3& arc = p.edges[static_cast<std::size_t>(step.edge)].arc;
      const Vec3 w = x - arc.circle.center;
      const double h = w.dot(arc.circle.normal);
      const Vec3 inplane = w - h * arc.circle.normal;
      const double rho = inplane.norm();
      if (rho < 1e-15) {
        best = std::min(best, std::hypot(h, arc.circle.radius));
        continue;
      }
      bool within = arc.full_circle;
      if (!within) {
        const double theta = arc.circle.angle_of(x);
        double off = std::fmod(theta - arc.theta_start, kTwoPi);
        if (off < 0.0) off += kTwoPi;
        within = off <= arc.sweep();
      }
      if (within) best = std::min(best, std::hypot(h, rho - arc.circle.radius));
      else best = std::min({best, (x - arc.start()).norm(), (x - arc.end()).norm()});
    }
  return best;
}

/// Vertices of the sampled boundary mesh, grouped by face.
inline std::vector<std::vector<Point3>> face_samples(const BallPolyhedron& p, int depth) {
  const TriangleMesh m = p_boundary_mesh(p, depth);
  std::vector<std::set<int>> ids(p.faces.size());
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
    for (int v : m.triangles[t]) ids[static_cast<std::size_t>(m.triangle_face[t])].insert(v);
  std::vector<std::vector<Point3>> out(p.faces.size());
  for (std::size_t f = 0; f < ids.size(); ++f)
    for (int v : ids[f]) out[f].push_back(m.vertices[static_cast<std::size_t>(v)]);
  return out;
}

struct CongruenceReport {
  bool isomorphic = false;
  LatticeMap mapping;
  std::size_t isomorphisms_examined = 0;
  double dihedral_max_deviation = 0.0;
  double hausdorff_max = 0.0;
  Isometry isometry;
  bool reflection = false;
  double rms = 0.0;
  bool congruent = false;
};

namespace detail {

/// All face bijections of a onto b that induce a lattice isomorphism,
/// found by backtracking with degree and adjacency pruning.
inline std::vector<LatticeMap> lattice_isomorphisms(const BallPolyhedron& a, const BallPolyhedron& b,
                                                    std::size_t limit) {
  std::vector<LatticeMap> out;
  if (a.f_vector() != b.f_vector()) return out;
  const std::size_t n = a.faces.size();
  auto adjacency = [](const BallPolyhedron& p) {
    std::vector<std::vector<int>> adj(p.faces.size(), std::vector<int>(p.faces.size(), 0));
    for (const auto& e : p.edges) {
      ++adj[static_cast<std::size_t>(e.ball_a)][static_cast<std::size_t>(e.ball_b)];
      ++adj[static_cast<std::size_t>(e.ball_b)][static_cast<std::size_t>(e.ball_a)];
    }
    return adj;
  };
  auto degrees = [](const BallPolyhedron& p) {
    const FaceLattice l = p.lattice();
    std::vector<std::pair<std::size_t, std::size_t>> deg;
    for (std::size_t f = 0; f < p.faces.size(); ++f) deg.push_back({l.face_edges[f].size(), l.face_vertices[f].size()});
    return deg;
  };
  const auto adj_a = adjacency(a), adj_b = adjacency(b);
  const auto deg_a = degrees(a), deg_b = degrees(b);
  {
    auto sa = deg_a, sb = deg_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return out;
  }
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (out.size() >= limit) return;
    if (i == n) {
      if (auto m = induced_lattice_map(a, b, map)) out.push_back(std::move(*m));
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || deg_a[i] != deg_b[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k)
        ok = adj_a[i][k] == adj_b[j][static_cast<std::size_t>(map[k])];
      if (!ok) continue;
      map[i] = static_cast<int>(j);
      used[j] = true;
      extend(i + 1);
      used[j] = false;
      map[i] = -1;
    }
  };
  extend(0);
  return out;
}

inline double directed_hausdorff(const std::vector<Point3>& samples, const BallPolyhedron& target, int face,
                                 const Isometry& iso) {
  double worst = 0.0;
  for (const auto& x : samples) worst = std::max(worst, distance_to_face(target, face, iso.apply(x)));
  return worst;
}

}  // namespace detail

/// Compares two center sets: face-lattice isomorphism, dihedral angles,
/// least-squares alignment of matched centers and per-face Hausdorff
/// distance of the aligned boundaries. Among several isomorphisms the one
/// with the smallest alignment error is reported.
inline CongruenceReport compare(const CenterSet& c1, const CenterSet& c2, int sample_depth = 3) {
  const BallPolyhedron a = build(reduce(c1));
  const BallPolyhedron b = build(reduce(c2));
  for (const auto* p : {&a, &b})
    if (!is_simple(*p) || !is_standard(*p))
      throw Error(ErrorKind::Precondition, "compare requires simple standard ball-polyhedra");

  CongruenceReport r;
  const auto isos = detail::lattice_isomorphisms(a, b, 100000);
  r.isomorphisms_examined = isos.size();
  if (isos.empty()) throw Error(ErrorKind::NoLatticeIsomorphism);
  r.isomorphic = true;

  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : isos) {
    std::vector<Point3> to;
    for (int f : m.face) to.push_back(b.centers[static_cast<std::size_t>(f)]);
    const Isometry iso = fit_isometry(a.centers.points(), to, true);
    const double rms = rms_distance(a.centers.points(), to, iso);
    if (rms < best) {
      best = rms;
      r.mapping = m;
      r.isometry = iso;
      r.rms = rms;
    }
  }
  r.reflection = r.isometry.reflection();

  const auto da = all_dihedrals(a), db = all_dihedrals(b);
  for (std::size_t e = 0; e < da.size(); ++e)
    r.dihedral_max_deviation = std::max(
        r.dihedral_max_deviation,
        std::abs(da[e].radians - db[static_cast<std::size_t>(r.mapping.edge[e])].radians));

  const auto sa = face_samples(a, sample_depth), sb = face_samples(b, sample_depth);
  const Isometry back = r.isometry.inverse();
  for (std::size_t f = 0; f < a.faces.size(); ++f) {
    const int g = r.mapping.face[f];
    r.hausdorff_max = std::max({r.hausdorff_max, detail::directed_hausdorff(sa[f], b, g, r.isometry),
                                detail::directed_hausdorff(sb[static_cast<std::size_t>(g)], a, static_cast<int>(f), back)});
  }
  const double eps = std::max(c1.tolerance().eps_geom, c2.tolerance().eps_geom);
  r.congruent = r.rms <= eps;
  return r;
}

// ---------------------------------------------------------------------------
// perturbation probe

struct ProbeTrial {
  double perturbation_norm = 0.0;
  double initial_residual = 0.0;  // max |alpha - alpha_target| after perturbing
  double final_residual = 0.0;
  int iterations = 0;
  double rms_to_original = 0.0;   // after best-fit alignment
  bool congruent = false;
};

struct ProbeReport {
  std::vector<ProbeTrial> trials;
  std::size_t congruent_trials = 0;
  double max_rms = 0.0;
  double max_final_residual = 0.0;
  double congruence_tolerance = 1e-6;
};

namespace detail {

/// Dihedral residuals alpha(|x_a - x_b|) - target over the edge pairs.
inline Eigen::VectorXd angle_residuals(const std::vector<Point3>& x, const std::vector<std::pair<int, int>>& pairs,
                                       const std::vector<double>& target) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double d = (x[static_cast<std::size_t>(pairs[k].first)] - x[static_cast<std::size_t>(pairs[k].second)]).norm();
    r[static_cast<Eigen::Index>(k)] = (d > 0.0 && d < 2.0) ? dihedral_from_distance(d) - target[k]
                                                           : std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace detail

/// Perturbs C away from its rigid motions and solves the dihedral-angle
/// equations back by Gauss-Newton with minimum-norm steps. A numerical
/// illustration of local rigidity, not a proof of it.
inline ProbeReport perturbation_probe(const CenterSet& c, int trials, double magnitude, std::uint64_t seed,
                                      double congruence_tolerance = 1e-6) {
  if (trials < 0 || !(magnitude >= 0.0)) throw std::invalid_argument("trials and magnitude must be non-negative");
  const RigidityCertificate cert = certify(c);
  if (!cert.certified()) throw Error(ErrorKind::Precondition, "probe requires a certified input: " + cert.verdict);

  const CenterSet rc = reduce(c);
  const BallPolyhedron p = build(rc);
  const std::vector<Point3>& x0 = rc.points();
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> target;
  for (const auto& a : all_dihedrals(p)) {
    const auto& e = p.edges[static_cast<std::size_t>(a.edge)];
    pairs.push_back({e.ball_a, e.ball_b});
    target.push_back(a.radians);
  }
  const auto m = static_cast<Eigen::Index>(x0.size());
  const Eigen::MatrixXd trivial = trivial_motions(x0);

  ProbeReport report;
  report.congruence_tolerance = congruence_tolerance;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (int trial = 0; trial < trials; ++trial) {
    ProbeTrial out;
    Eigen::VectorXd delta(3 * m);
    for (Eigen::Index i = 0; i < delta.size(); ++i) delta[i] = normal(rng);
    delta -= trivial * (trivial.transpose() * delta);
    if (delta.norm() > 0.0) delta *= magnitude / delta.norm();
    out.perturbation_norm = delta.norm();

    std::vector<Point3> x = x0;
    for (Eigen::Index i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] += delta.segment<3>(3 * i);
    Eigen::VectorXd r = detail::angle_residuals(x, pairs, target);
    out.initial_residual = r.cwiseAbs().maxCoeff();

    for (int it = 0; it < 100 && r.cwiseAbs().maxCoeff() > 1e-15; ++it) {
      Eigen::MatrixXd j = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pairs.size()), 3 * m);
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [ia, ib] = pairs[k];
        const Vec3 diff = x[static_cast<std::size_t>(ia)] - x[static_cast<std::size_t>(ib)];
        const double d = diff.norm();
        const double dalpha = -1.0 / std::sqrt(1.0 - 0.25 * d * d);
        const Vec3 g = dalpha * diff / d;
        j.block<1, 3>(static_cast<Eigen::Index>(k), 3 * ia) = g.transpose();
        j.block<1, 3>(static_cast<Eigen::Index>(k), 3 * ib) = -g.transpose();
      }
      const Eigen::VectorXd step = j.completeOrthogonalDecomposition().solve(-r);
      double scale = 1.0;
      const double before = r.norm();
      std::vector<Point3> trial_x;
      Eigen::VectorXd trial_r;
      for (int halving = 0; halving < 30; ++halving, scale *= 0.5) {
        trial_x = x;
        for (Eigen::Index i = 0; i < m; ++i) trial_x[static_cast<std::size_t>(i)] += scale * step.segment<3>(3 * i);
        trial_r = detail::angle_residuals(trial_x, pairs, target);
        if (trial_r.allFinite() && trial_r.norm() < before) break;
      }
      out.iterations = it + 1;
      if (!(trial_r.allFinite() && trial_r.norm() < before)) break;
      x = std::move(trial_x);
      r = std::move(trial_r);
      if ((scale * step).norm() < 1e-16) break;
    }
    out.final_residual = r.cwiseAbs().maxCoeff();
    const Isometry iso = fit_isometry(x, x0, true);
    out.rms_to_original = rms_distance(x, x0, iso);
    out.congruent = out.rms_to_original <= congruence_tolerance;
    if (out.congruent) ++report.congruent_trials;
    report.max_rms = std::max(report.max_rms, out.rms_to_original);
    report.max_final_residual = std::max(report.max_final_residual, out.final_residual);
    report.trials.push_back(out);
  }
  return report;
}

}  // namespace ballpoly
