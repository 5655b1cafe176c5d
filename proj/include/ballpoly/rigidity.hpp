#pragma once

// Infinitesimal rigidity of bar-joint frameworks, and the convexity
// hypotheses on the polyhedron Q.

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ballpoly/hull.hpp"
#include "ballpoly/truncated.hpp"
#include "ballpoly/voronoi.hpp"

namespace ballpoly {

struct Framework {
  std::vector<Point3> points;
  std::vector<std::pair<int, int>> edges;

  Framework() = default;
  Framework(std::vector<Point3> pts, std::vector<std::pair<int, int>> bars)
      : points(std::move(pts)), edges(std::move(bars)) {
    std::set<std::pair<int, int>> seen;
    for (auto& [a, b] : edges) {
      if (a == b) throw std::invalid_argument("bar endpoints must differ");
      if (a > b) std::swap(a, b);
      if (a < 0 || static_cast<std::size_t>(b) >= points.size()) throw std::out_of_range("bar endpoint");
      if (!seen.insert({a, b}).second) throw std::invalid_argument("repeated bar");
    }
  }

  std::size_t dof() const { return 3 * points.size(); }
};

/// Fan-triangulates polygons over `points`: the generic path for polyhedra
/// whose boundary is not already simplicial.
inline Framework framework_from_polygons(const std::vector<Point3>& points,
                                         const std::vector<std::vector<int>>& polygons) {
  std::set<std::pair<int, int>> bars;
  auto add = [&](int a, int b) { bars.insert({std::min(a, b), std::max(a, b)}); };
  for (const auto& poly : polygons) {
    for (std::size_t i = 0; i < poly.size(); ++i) add(poly[i], poly[(i + 1) % poly.size()]);
    for (std::size_t i = 2; i + 1 < poly.size(); ++i) add(poly[0], poly[i]);
  }
  return Framework(points, {bars.begin(), bars.end()});
}

struct RigidityMatrixData {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd singular_values;  // descending, min(rows, cols) entries
  double threshold = 0.0;
  int rank = 0;
  int nullity = 0;
  /// Some singular value lies within a factor 10 of the threshold.
  bool ill_conditioned = false;
  /// Orthonormal kernel basis, one column per flex (3m rows).
  Eigen::MatrixXd kernel;
};

/// One row per bar (i, j): p_i - p_j in block i and p_j - p_i in block j.
inline RigidityMatrixData rigidity_matrix(const Framework& f, const Tolerance& tol = {}) {
  if (f.points.empty()) throw Error(ErrorKind::Precondition, "framework has no joints");
  RigidityMatrixData r;
  const auto rows = static_cast<Eigen::Index>(f.edges.size());
  const auto cols = static_cast<Eigen::Index>(f.dof());
  r.matrix = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index e = 0; e < rows; ++e) {
    const auto [i, j] = f.edges[static_cast<std::size_t>(e)];
    const Vec3 d = f.points[static_cast<std::size_t>(i)] - f.points[static_cast<std::size_t>(j)];
    r.matrix.block<1, 3>(e, 3 * i) = d.transpose();
    r.matrix.block<1, 3>(e, 3 * j) = -d.transpose();
  }
  // Pad to square so the full right singular basis is available.
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(std::max(rows, cols), cols);
  padded.topRows(rows) = r.matrix;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(padded, Eigen::ComputeFullV);
  r.singular_values = svd.singularValues().head(std::min(rows, cols));
  const double top = r.singular_values.size() > 0 ? r.singular_values[0] : 0.0;
  r.threshold = tol.eps_rank * top;
  for (Eigen::Index k = 0; k < r.singular_values.size(); ++k) {
    const double s = r.singular_values[k];
    if (s > r.threshold) ++r.rank;
    if (top > 0.0 && s > r.threshold / 10.0 && s < r.threshold * 10.0) r.ill_conditioned = true;
  }
  r.nullity = static_cast<int>(cols) - r.rank;
  r.kernel = svd.matrixV().rightCols(r.nullity);
  return r;
}

/// Orthonormal basis (3m x 6) of the infinitesimal rigid motions:
/// translations and q_i = w x p_i.
inline Eigen::MatrixXd trivial_motions(const std::vector<Point3>& pts) {
  const auto m = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3 * m, 6);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Point3& p = pts[static_cast<std::size_t>(i)];
    for (int a = 0; a < 3; ++a) {
      t(3 * i + a, a) = 1.0;
      const Vec3 w = Vec3::Unit(a).cross(p);
      t.block<3, 1>(3 * i, 3 + a) = w;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(t);
  return qr.householderQ() * Eigen::MatrixXd::Identity(3 * m, 6);
}

/// Norm of the component of `flex` orthogonal to the trivial motions.
inline double nontrivial_part(const Eigen::VectorXd& flex, const Eigen::MatrixXd& trivial) {
  return (flex - trivial * (trivial.transpose() * flex)).norm();
}

/// max over bars of |(p_i - p_j).(q_i - q_j)| / |p_i - p_j|: the first-order
/// rate of change of bar lengths under the velocity field `flex`.
inline double flex_length_derivative(const Framework& f, const Eigen::VectorXd& flex) {
  if (flex.size() != static_cast<Eigen::Index>(f.dof())) throw std::invalid_argument("flex size mismatch");
  double worst = 0.0;
  for (const auto& [i, j] : f.edges) {
    const Vec3 d = f.points[static_cast<std::size_t>(i)] - f.points[static_cast<std::size_t>(j)];
    const Vec3 q = flex.segment<3>(3 * i) - flex.segment<3>(3 * j);
    worst = std::max(worst, std::abs(d.dot(q)) / d.norm());
  }
  return worst;
}

/// The same rate by central differences of the bar lengths.
inline double flex_length_derivative_fd(const Framework& f, const Eigen::VectorXd& flex, double h = 1e-6) {
  double worst = 0.0;
  for (const auto& [i, j] : f.edges) {
    const Vec3 pi = f.points[static_cast<std::size_t>(i)], pj = f.points[static_cast<std::size_t>(j)];
    const Vec3 qi = flex.segment<3>(3 * i), qj = flex.segment<3>(3 * j);
    const double plus = ((pi + h * qi) - (pj + h * qj)).norm();
    const double minus = ((pi - h * qi) - (pj - h * qj)).norm();
    worst = std::max(worst, std::abs(plus - minus) / (2.0 * h));
  }
  return worst;
}

struct RigidityResult {
  bool rigid = false;
  RigidityMatrixData data;
  /// Kernel vectors with their trivial-motion component removed.
  std::vector<double> nontrivial_residuals;
};

/// Rigid iff the kernel of the rigidity matrix is exactly the 6-dimensional
/// space of trivial motions.
inline RigidityResult is_infinitesimally_rigid(const Framework& f, const Tolerance& tol = {}) {
  if (affine_dimension(f.points, tol.eps_geom) < 3) throw Error(ErrorKind::DegenerateSpan);
  RigidityResult r;
  r.data = rigidity_matrix(f, tol);
  r.rigid = r.data.nullity == 6;
  const Eigen::MatrixXd trivial = trivial_motions(f.points);
  for (Eigen::Index k = 0; k < r.data.kernel.cols(); ++k)
    r.nontrivial_residuals.push_back(nontrivial_part(r.data.kernel.col(k), trivial));
  return r;
}

/// Framework on the boundary of Q: joints are the boundary vertices (in
/// ascending site order), bars the boundary edges.
inline Framework boundary_framework(const PolyhedronQ& q, std::vector<int>* joint_sites = nullptr) {
  std::vector<int> index(q.sites.size(), -1);
  std::vector<Point3> pts;
  for (int v : q.boundary_vertices) {
    index[static_cast<std::size_t>(v)] = static_cast<int>(pts.size());
    pts.push_back(q.sites[static_cast<std::size_t>(v)]);
  }
  if (joint_sites) *joint_sites = q.boundary_vertices;
  std::vector<std::vector<int>> polys;
  for (const auto& f : q.boundary_faces) {
    std::vector<int> local;
    for (int v : f) local.push_back(index[static_cast<std::size_t>(v)]);
    polys.push_back(local);
  }
  return framework_from_polygons(pts, polys);
}

/// Every vertex of Q is a vertex of the convex hull of Q's vertex set.
inline bool check_weakly_convex(const std::vector<Point3>& sites, const std::vector<int>& vertices, double eps = 1e-9) {
  const auto hull = convex_hull_of(sites, vertices, eps);
  return std::all_of(vertices.begin(), vertices.end(), [&](int v) { return hull.is_vertex(v); });
}

inline bool check_weakly_convex(const PolyhedronQ& q, double eps = 1e-9) {
  return check_weakly_convex(q.sites, q.vertices, eps);
}

struct Codecomposition {
  bool ok = false;
  std::vector<std::vector<int>> complement_cells;
  std::vector<std::array<int, 4>> tetrahedra;  // triangulation of the complement
  double volume_q = 0.0;
  double volume_complement = 0.0;
  double volume_hull = 0.0;
};

/// The complement of Q in conv(Q) is the union of the Delaunay 3-cells not in
/// Q; each is fan-triangulated from its smallest vertex, adding no vertices.
inline Codecomposition check_codecomposable(const PolyhedronQ& q, const DelaunayComplex& d, double eps = 1e-9) {
  Codecomposition r;
  std::set<std::vector<int>> in_q(q.cells.begin(), q.cells.end());
  for (const auto& cell : q.cells)
    if (d.find(cell) < 0) throw Error(ErrorKind::Precondition, "Q cell " + detail::sites_str(cell) + " is not in D");
  for (int idx : d.cells_of_dimension(3)) {
    const auto& cell = d.cells[static_cast<std::size_t>(idx)].sites;
    const auto hull = convex_hull_of(d.sites, cell, eps);
    if (in_q.count(cell)) {
      r.volume_q += hull.volume;
      continue;
    }
    if (hull.dimension != 3 || hull.vertices.size() != cell.size())
      throw Error(ErrorKind::ComplementNotConvex, detail::sites_str(cell));
    r.complement_cells.push_back(cell);
    const int apex = cell.front();
    const Point3& a = d.sites[static_cast<std::size_t>(apex)];
    for (const auto& poly : hull.facets) {
      if (std::find(poly.begin(), poly.end(), apex) != poly.end()) continue;
      for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
        r.tetrahedra.push_back({apex, poly[0], poly[t], poly[t + 1]});
        const Vec3 u = d.sites[static_cast<std::size_t>(poly[0])] - a;
        const Vec3 v = d.sites[static_cast<std::size_t>(poly[t])] - a;
        const Vec3 w = d.sites[static_cast<std::size_t>(poly[t + 1])] - a;
        r.volume_complement += std::abs(u.dot(v.cross(w))) / 6.0;
      }
    }
  }
  r.volume_hull = convex_hull_of(d.sites, q.vertices, eps).volume;
  const double gap = std::abs(r.volume_q + r.volume_complement - r.volume_hull);
  if (gap > 1e-6 * std::max(1e-12, r.volume_hull))
    throw Error(ErrorKind::Precondition, "Q and its complement do not tile conv(Q)");
  r.ok = true;
  return r;
}

}  // namespace ballpoly
