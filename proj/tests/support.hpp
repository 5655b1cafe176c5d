#pragma once

// Fixtures, random instance generators and brute-force oracles shared by the
// unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <functional>
#include <set>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "ballpoly/ballpoly.hpp"

namespace testsupport {

using ballpoly::CenterSet;
using ballpoly::Point3;
using ballpoly::Vec3;

/// Regular tetrahedron with the given edge, centered at the origin.
inline std::vector<Point3> tetra_points(double edge = 1.0) {
  const double s = edge / (2.0 * std::sqrt(2.0));
  return {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
}

inline CenterSet tetra(double edge = 1.0) { return CenterSet(tetra_points(edge)); }

inline CenterSet octahedral(double t = 0.55) {
  return CenterSet({{t, 0, 0}, {-t, 0, 0}, {0, t, 0}, {0, -t, 0}, {0, 0, t}, {0, 0, -t}});
}

inline std::vector<Point3> cube_points(double h = 0.5) {
  std::vector<Point3> p;
  for (int i = 0; i < 8; ++i) p.emplace_back(i & 1 ? h : -h, i & 2 ? h : -h, i & 4 ? h : -h);
  return p;
}

inline Point3 uniform_in_ball(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Point3 p(u(rng), u(rng), u(rng));
    if (p.squaredNorm() <= 1.0) return radius * p;
  }
}

/// n centers i.i.d. uniform in a ball of the given radius.
inline CenterSet random_centers(std::mt19937_64& rng, int n, double radius = 0.3) {
  std::vector<Point3> c;
  for (int i = 0; i < n; ++i) c.push_back(uniform_in_ball(rng, radius));
  return CenterSet(c);
}

struct Instance {
  int sampled = 0;         // number of centers drawn
  CenterSet reduced;       // reduced center set
  ballpoly::BallPolyhedron p;
  int attempts = 0;        // draws including rejections
};

/// Draws n in [n_min, n_max] and n centers in a ball of radius 0.3 until the
/// reduced ball-polyhedron is simple and standard.
inline Instance random_standard_instance(std::mt19937_64& rng, int n_min = 4, int n_max = 10,
                                         double radius = 0.3) {
  std::uniform_int_distribution<int> pick(n_min, n_max);
  Instance inst;
  for (;;) {
    ++inst.attempts;
    const int n = pick(rng);
    const CenterSet c = random_centers(rng, n, radius);
    try {
      CenterSet r = ballpoly::reduce(c);
      auto p = ballpoly::build(r);
      if (!ballpoly::is_simple(p) || !ballpoly::is_standard(p)) continue;
      inst.sampled = n;
      inst.reduced = std::move(r);
      inst.p = std::move(p);
      return inst;
    } catch (const ballpoly::Error&) {
      continue;
    }
  }
}

inline ballpoly::Isometry random_isometry(std::mt19937_64& rng, bool reflect) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
  Eigen::Matrix3d q = qr.householderQ();
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  if (reflect) q.col(2) *= -1.0;
  ballpoly::Isometry iso;
  iso.rotation = q;
  iso.translation = Vec3(g(rng), g(rng), g(rng));
  return iso;
}

inline CenterSet transformed(const CenterSet& c, const ballpoly::Isometry& iso) {
  std::vector<Point3> p;
  for (const auto& x : c.points()) p.push_back(iso.apply(x));
  return CenterSet(p, c.labels(), c.tolerance());
}

// ---------------------------------------------------------------------------
// Brute-force farthest-point Delaunay oracle.
//
// A site subset S is a cell iff some x is equidistant from S and strictly
// farther from S than from every other site. With t the smallest excess
// |x - s|^2 - |x - c|^2 over the other sites c, the subset is a cell iff the
// linear program "maximize t over the equidistance plane, x in a large box,
// t <= 1" has a positive optimum. The LP is solved by enumerating the
// vertices of its feasible region.

inline std::optional<double> lp_max_excess(const std::vector<Point3>& c, const std::vector<int>& s) {
  const Point3& s0 = c[static_cast<std::size_t>(s.front())];
  // equalities: 2 x.(s_i - s0) = |s_i|^2 - |s0|^2
  const int m_eq = static_cast<int>(s.size()) - 1;
  Eigen::MatrixXd a_eq(std::max(m_eq, 1), 3);
  Eigen::VectorXd b_eq(std::max(m_eq, 1));
  a_eq.setZero();
  b_eq.setZero();
  for (int i = 0; i < m_eq; ++i) {
    const Point3& si = c[static_cast<std::size_t>(s[static_cast<std::size_t>(i + 1)])];
    a_eq.row(i) = 2.0 * (si - s0).transpose();
    b_eq[i] = si.squaredNorm() - s0.squaredNorm();
  }
  // parametrize x = x0 + N y
  Eigen::Vector3d x0 = Eigen::Vector3d::Zero();
  Eigen::MatrixXd null_basis = Eigen::MatrixXd::Identity(3, 3);
  if (m_eq > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a_eq, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double top = svd.singularValues()[0];
    int rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()[k] > 1e-10 * top) ++rank;
    // x0 = pseudo-inverse solution; reject inconsistent systems
    Eigen::VectorXd ub = svd.matrixU().transpose() * b_eq;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
    for (int k = 0; k < rank; ++k) y[k] = ub[k] / svd.singularValues()[k];
    x0 = svd.matrixV() * y;
    if ((a_eq * x0 - b_eq).norm() > 1e-9 * std::max(1.0, b_eq.norm())) return std::nullopt;
    null_basis = svd.matrixV().rightCols(3 - rank);
  }
  const int k = static_cast<int>(null_basis.cols());
  const int dim = k + 1;  // (y, t)

  // rows: g . (y, t) <= h
  std::vector<Eigen::VectorXd> g;
  std::vector<double> h;
  const double box = 1e3;
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (std::find(s.begin(), s.end(), static_cast<int>(m)) != s.end()) continue;
    // excess(x) = 2 x.(c_m - s0) + |s0|^2 - |c_m|^2 >= t
    const Eigen::Vector3d w = 2.0 * (c[m] - s0);
    Eigen::VectorXd row(dim);
    row.head(k) = -(null_basis.transpose() * w);
    row[k] = 1.0;
    g.push_back(row);
    h.push_back(w.dot(x0) + s0.squaredNorm() - c[m].squaredNorm());
  }
  for (int axis = 0; axis < 3; ++axis)
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(dim);
      row.head(k) = sign * null_basis.row(axis).transpose();
      g.push_back(row);
      h.push_back(box - sign * x0[axis]);
    }
  {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(dim);
    row[k] = 1.0;
    g.push_back(row);
    h.push_back(1.0);
  }

  std::optional<double> best;
  const int rows = static_cast<int>(g.size());
  std::vector<int> pick(static_cast<std::size_t>(dim));
  std::function<void(int, int)> choose = [&](int start, int depth) {
    if (depth == dim) {
      Eigen::MatrixXd a(dim, dim);
      Eigen::VectorXd b(dim);
      for (int i = 0; i < dim; ++i) {
        a.row(i) = g[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])].transpose();
        b[i] = h[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < dim) return;
      const Eigen::VectorXd z = lu.solve(b);
      for (int r = 0; r < rows; ++r)
        if (g[static_cast<std::size_t>(r)].dot(z) > h[static_cast<std::size_t>(r)] + 1e-9) return;
      if (!best || z[k] > *best) best = z[k];
      return;
    }
    for (int r = start; r < rows; ++r) {
      pick[static_cast<std::size_t>(depth)] = r;
      choose(r + 1, depth + 1);
    }
  };
  choose(0, 0);
  return best;
}

struct OracleCell {
  std::vector<int> sites;
  int dimension = 0;
  bool operator<(const OracleCell& o) const {
    return std::tie(dimension, sites) < std::tie(o.dimension, o.sites);
  }
  bool operator==(const OracleCell& o) const { return dimension == o.dimension && sites == o.sites; }
};

/// All subsets with a positive LP optimum, sorted by (dimension, sites).
inline std::vector<OracleCell> brute_force_delaunay(const std::vector<Point3>& c, double margin = 1e-9) {
  const int n = static_cast<int>(c.size());
  std::vector<OracleCell> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    const auto t = lp_max_excess(c, s);
    if (!t || *t <= margin) continue;
    std::vector<Point3> pts;
    for (int i : s) pts.push_back(c[static_cast<std::size_t>(i)]);
    out.push_back({s, ballpoly::affine_dimension(pts, 1e-9)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Volume of conv(points) by brute-force facet enumeration, independent of
/// the library hull: every triple whose plane has all points on one side
/// contributes its fan of tetrahedra from the centroid, counted once per
/// plane.
inline double brute_force_hull_volume(const std::vector<Point3>& p) {
  const std::size_t n = p.size();
  Point3 centroid = Point3::Zero();
  for (const auto& x : p) centroid += x;
  centroid /= static_cast<double>(n);
  double volume = 0.0;
  std::set<std::vector<std::size_t>> planes;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Vec3 normal = (p[j] - p[i]).cross(p[k] - p[i]);
        if (normal.norm() < 1e-12) continue;
        normal.normalize();
        bool pos = false, neg = false;
        std::vector<std::size_t> on;
        for (std::size_t m = 0; m < n; ++m) {
          const double d = normal.dot(p[m] - p[i]);
          if (d > 1e-10) pos = true;
          else if (d < -1e-10) neg = true;
          else on.push_back(m);
        }
        if (pos && neg) continue;
        if (!planes.insert(on).second) continue;
        // area of the planar polygon through `on`, via its own 2D hull
        const auto [u, v] = ballpoly::plane_basis(normal);
        std::vector<std::pair<double, double>> q;
        for (std::size_t m : on) q.push_back({u.dot(p[m]), v.dot(p[m])});
        std::sort(q.begin(), q.end());
        std::vector<std::pair<double, double>> hull;
        auto cross = [](auto o, auto a, auto b) {
          return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
        };
        for (int pass = 0; pass < 2; ++pass) {
          const std::size_t base = hull.size();
          for (const auto& x : q) {
            while (hull.size() >= base + 2 && cross(hull[hull.size() - 2], hull.back(), x) <= 0) hull.pop_back();
            hull.push_back(x);
          }
          hull.pop_back();
          std::reverse(q.begin(), q.end());
        }
        double area = 0.0;
        for (std::size_t a = 0; a < hull.size(); ++a) {
          const auto& x = hull[a];
          const auto& y = hull[(a + 1) % hull.size()];
          area += x.first * y.second - y.first * x.second;
        }
        area = std::abs(area) / 2.0;
        const double height = std::abs(normal.dot(p[i] - centroid));
        volume += area * height / 3.0;
      }
  return volume;
}

}  // namespace testsupport
