#pragma once

// Geometric primitives: unit-sphere intersections, circumspheres, minimum
// enclosing balls and projection onto convex polyhedral sets.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ballpoly/tolerance.hpp"

namespace ballpoly {

using Vec3 = Eigen::Vector3d;
using Point3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline bool is_finite(const Vec3& v) { return v.allFinite(); }

/// Orthonormal in-plane basis for a plane with unit normal `n`.
/// The first axis is the normalized projection of +x, falling back to +y
/// when +x is nearly parallel to `n`.
inline std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
  Vec3 e1 = Vec3::UnitX() - n * n.x();
  if (e1.norm() < 1e-3) e1 = Vec3::UnitY() - n * n.y();
  e1.normalize();
  return {e1, n.cross(e1)};
}

/// Counterclockwise angle in [0, 2pi) turning `from` into `to` about `axis`.
inline double ccw_angle(const Vec3& from, const Vec3& to, const Vec3& axis) {
  double a = std::atan2(axis.dot(from.cross(to)), from.dot(to));
  if (a < 0.0) a += kTwoPi;
  return a;
}

struct Sphere {
  Point3 center = Point3::Zero();
  double radius = 0.0;
};

struct Circle3 {
  Point3 center = Point3::Zero();
  double radius = 0.0;
  Vec3 normal = Vec3::UnitZ();

  std::pair<Vec3, Vec3> basis() const { return plane_basis(normal); }

  Point3 point_at(double theta) const {
    auto [e1, e2] = basis();
    return center + radius * (std::cos(theta) * e1 + std::sin(theta) * e2);
  }

  /// Unit tangent in the direction of increasing angle (counterclockwise
  /// about `normal`).
  Vec3 tangent_at(double theta) const {
    auto [e1, e2] = basis();
    return -std::sin(theta) * e1 + std::cos(theta) * e2;
  }

  /// Angle in [0, 2pi) of the projection of `p` into the circle plane.
  double angle_of(const Point3& p) const {
    auto [e1, e2] = basis();
    const Vec3 r = p - center;
    double a = std::atan2(r.dot(e2), r.dot(e1));
    if (a < 0.0) a += kTwoPi;
    return a;
  }
};

/// Arc of a circle traversed counterclockwise about the circle normal from
/// `theta_start` to `theta_end` (theta_end > theta_start). A full circle is
/// flagged explicitly and then covers [theta_start, theta_start + 2pi].
struct Arc3 {
  Circle3 circle;
  double theta_start = 0.0;
  double theta_end = kTwoPi;
  bool full_circle = false;

  double sweep() const { return theta_end - theta_start; }
  Point3 start() const { return circle.point_at(theta_start); }
  Point3 end() const { return circle.point_at(theta_end); }
  Point3 point_at_fraction(double s) const {
    return circle.point_at(theta_start + s * sweep());
  }
  Point3 midpoint() const { return point_at_fraction(0.5); }
};

/// Intersection circle of the unit spheres around `c1` and `c2`.
///
/// The normal points from `c1` to `c2`. Returns nothing when the spheres are
/// disjoint and a radius-0 circle when they are tangent within eps_geom.
inline std::optional<Circle3> sphere_pair_circle(const Point3& c1, const Point3& c2,
                                                 const Tolerance& tol = {}) {
  const Vec3 diff = c2 - c1;
  const double d = diff.norm();
  if (d <= tol.eps_geom) throw Error(ErrorKind::CoincidentCenters);
  if (d > 2.0 + tol.eps_geom) return std::nullopt;
  Circle3 c;
  c.center = 0.5 * (c1 + c2);
  c.normal = diff / d;
  if (std::abs(d - 2.0) <= tol.eps_geom) {
    c.radius = 0.0;
  } else {
    c.radius = std::sqrt(1.0 - 0.25 * d * d);
  }
  return c;
}

/// Circumcenter and circumradius of a non-degenerate triangle.
inline std::pair<Point3, double> triangle_circumcircle(const Point3& p1, const Point3& p2,
                                                       const Point3& p3) {
  const Vec3 a = p2 - p1;
  const Vec3 b = p3 - p1;
  const Vec3 axb = a.cross(b);
  const Vec3 offset = (a.squaredNorm() * b - b.squaredNorm() * a).cross(axb) /
                      (2.0 * axb.squaredNorm());
  return {p1 + offset, offset.norm()};
}

inline bool collinear(const Point3& p1, const Point3& p2, const Point3& p3, double eps) {
  const Vec3 a = p2 - p1;
  const Vec3 b = p3 - p1;
  const double longest = std::max({a.norm(), b.norm(), (p3 - p2).norm()});
  if (longest <= eps) return true;
  // smallest triangle height
  return a.cross(b).norm() / longest <= eps;
}

/// Points at unit distance from all three centers: zero, one (tangential,
/// circumradius within eps_geom of 1) or two points mirrored in the plane
/// of the centers.
inline std::vector<Point3> triple_points(const Point3& c1, const Point3& c2, const Point3& c3,
                                         const Tolerance& tol = {}) {
  if (collinear(c1, c2, c3, tol.eps_geom)) throw Error(ErrorKind::DegenerateTriple);
  auto [o, r] = triangle_circumcircle(c1, c2, c3);
  if (r > 1.0 + tol.eps_geom) return {};
  if (std::abs(r - 1.0) <= tol.eps_geom) return {o};
  const Vec3 n = (c2 - c1).cross(c3 - c1).normalized();
  const double h = std::sqrt(1.0 - r * r);
  return {o + h * n, o - h * n};
}

/// Sphere through four affinely independent points; nothing when the points
/// are coplanar within eps_geom.
inline std::optional<Sphere> circumsphere(const Point3& p1, const Point3& p2, const Point3& p3,
                                          const Point3& p4, const Tolerance& tol = {}) {
  Eigen::Matrix3d a;
  a.row(0) = (p2 - p1).transpose();
  a.row(1) = (p3 - p1).transpose();
  a.row(2) = (p4 - p1).transpose();
  const double det = a.determinant();
  const double max_cross = std::max({(p2 - p1).cross(p3 - p1).norm(),
                                     (p2 - p1).cross(p4 - p1).norm(),
                                     (p3 - p1).cross(p4 - p1).norm(),
                                     (p3 - p2).cross(p4 - p2).norm()});
  if (max_cross <= 0.0 || std::abs(det) / max_cross <= tol.eps_geom) return std::nullopt;
  const Eigen::Vector3d rhs(0.5 * (p2 - p1).squaredNorm(), 0.5 * (p3 - p1).squaredNorm(),
                            0.5 * (p4 - p1).squaredNorm());
  const Vec3 offset = a.partialPivLu().solve(rhs);
  return Sphere{p1 + offset, offset.norm()};
}

/// Dimension (0..3) of the affine hull of `pts`.
inline int affine_dimension(std::span<const Point3> pts, double eps) {
  if (pts.size() <= 1) return 0;
  Eigen::MatrixXd m(3, static_cast<Eigen::Index>(pts.size() - 1));
  for (std::size_t i = 1; i < pts.size(); ++i) m.col(static_cast<Eigen::Index>(i - 1)) = pts[i] - pts[0];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > eps) ++rank;
  return rank;
}

/// Smallest ball through the given support points with its center in their
/// affine hull (circumball of 1..4 points).
inline std::optional<Sphere> support_ball(std::span<const Point3> support, double eps) {
  switch (support.size()) {
    case 1:
      return Sphere{support[0], 0.0};
    case 2:
      return Sphere{0.5 * (support[0] + support[1]), 0.5 * (support[0] - support[1]).norm()};
    case 3: {
      if (collinear(support[0], support[1], support[2], eps)) return std::nullopt;
      auto [o, r] = triangle_circumcircle(support[0], support[1], support[2]);
      return Sphere{o, r};
    }
    case 4:
      return circumsphere(support[0], support[1], support[2], support[3], Tolerance{eps, 1e-8});
    default:
      return std::nullopt;
  }
}

/// Minimum enclosing ball by exhaustive support enumeration (the optimum is
/// the circumball of at most four points). Quartic, intended for small sets.
inline Sphere min_enclosing_ball(std::span<const Point3> pts, double eps = 1e-12) {
  if (pts.empty()) return Sphere{Point3::Zero(), -1.0};
  if (pts.size() == 1) return Sphere{pts[0], 0.0};
  const std::size_t n = pts.size();
  Sphere best{Point3::Zero(), std::numeric_limits<double>::infinity()};
  auto consider = [&](std::span<const Point3> support) {
    auto ball = support_ball(support, eps);
    if (!ball || ball->radius >= best.radius) return;
    const double slack = eps * std::max(1.0, ball->radius);
    for (const auto& p : pts)
      if ((p - ball->center).norm() > ball->radius + slack) return;
    best = *ball;
  };
  std::array<Point3, 4> s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      s[0] = pts[i];
      s[1] = pts[j];
      consider(std::span<const Point3>(s.data(), 2));
      for (std::size_t k = j + 1; k < n; ++k) {
        s[2] = pts[k];
        consider(std::span<const Point3>(s.data(), 3));
        for (std::size_t l = k + 1; l < n; ++l) {
          s[3] = pts[l];
          consider(std::span<const Point3>(s.data(), 4));
        }
      }
    }
  return best;
}

/// Closed half-space {x : normal . x <= offset}.
struct Halfspace {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;

  double violation(const Point3& x) const { return normal.dot(x) - offset; }
};

/// Hyperplane {x : normal . x == offset}.
struct Hyperplane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
};

/// Euclidean projection of `q` onto {x : eqs hold, ineqs hold}.
///
/// The projection lies in the relative interior of a face of the feasible set
/// whose affine hull is cut out by the equalities plus at most (3 - rank)
/// active inequalities, so enumerating those active sets and keeping the
/// nearest feasible candidate is exact. Returns nothing when infeasible.
inline std::optional<Point3> project_onto_polyhedron(const Point3& q,
                                                     std::span<const Hyperplane> eqs,
                                                     std::span<const Halfspace> ineqs,
                                                     double eps) {
  const auto n_eq = static_cast<Eigen::Index>(eqs.size());
  int eq_rank = 0;
  if (n_eq > 0) {
    Eigen::MatrixXd a(n_eq, 3);
    for (Eigen::Index r = 0; r < n_eq; ++r) a.row(r) = eqs[static_cast<std::size_t>(r)].normal.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-12) ++eq_rank;
  }
  const int free_dims = 3 - eq_rank;
  const std::size_t m = ineqs.size();

  std::optional<Point3> best;
  double best_dist = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> active;

  auto try_active = [&]() {
    const auto rows = n_eq + static_cast<Eigen::Index>(active.size());
    Point3 p = q;
    if (rows > 0) {
      Eigen::MatrixXd a(rows, 3);
      Eigen::VectorXd b(rows);
      for (Eigen::Index r = 0; r < n_eq; ++r) {
        a.row(r) = eqs[static_cast<std::size_t>(r)].normal.transpose();
        b[r] = eqs[static_cast<std::size_t>(r)].offset;
      }
      for (std::size_t k = 0; k < active.size(); ++k) {
        a.row(n_eq + static_cast<Eigen::Index>(k)) = ineqs[active[k]].normal.transpose();
        b[n_eq + static_cast<Eigen::Index>(k)] = ineqs[active[k]].offset;
      }
      const Eigen::VectorXd resid = a * q - b;
      const Eigen::Vector3d step = a.completeOrthogonalDecomposition().solve(resid);
      p = q - step;
      if ((a * p - b).cwiseAbs().maxCoeff() > eps) return;
    }
    for (const auto& h : ineqs)
      if (h.violation(p) > eps) return;
    const double d = (p - q).norm();
    if (d < best_dist) {
      best_dist = d;
      best = p;
    }
  };

  // Enumerate active sets of size 0..free_dims in lexicographic order.
  auto recurse = [&](auto&& self, std::size_t from) -> void {
    try_active();
    if (static_cast<int>(active.size()) == free_dims) return;
    for (std::size_t k = from; k < m; ++k) {
      active.push_back(k);
      self(self, k + 1);
      active.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

/// Rigid motion x -> rotation * x + translation (rotation may be improper).
struct Isometry {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();

  Point3 apply(const Point3& p) const { return rotation * p + translation; }
  Isometry inverse() const {
    Isometry inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(inv.rotation * translation);
    return inv;
  }
  bool reflection() const { return rotation.determinant() < 0.0; }
};

/// Least-squares isometry mapping `from[i]` onto `to[i]` (Kabsch). With
/// `allow_reflection` the better of the proper and improper fits is kept.
inline Isometry fit_isometry(std::span<const Point3> from, std::span<const Point3> to,
                             bool allow_reflection) {
  const auto n = static_cast<double>(from.size());
  Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) {
    ca += from[i];
    cb += to[i];
  }
  ca /= n;
  cb /= n;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) h += (from[i] - ca) * (to[i] - cb).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();

  auto make = [&](double sign) {
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = sign;
    Isometry iso;
    iso.rotation = v * d * u.transpose();
    iso.translation = cb - iso.rotation * ca;
    return iso;
  };
  auto rms = [&](const Isometry& iso) {
    double s = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) s += (iso.apply(from[i]) - to[i]).squaredNorm();
    return std::sqrt(s / n);
  };
  const double det_sign = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  Isometry proper = make(det_sign);
  if (!allow_reflection) return proper;
  Isometry improper = make(-det_sign);
  return rms(improper) < rms(proper) ? improper : proper;
}

inline double rms_distance(std::span<const Point3> a, std::span<const Point3> b,
                           const Isometry& iso) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (iso.apply(a[i]) - b[i]).squaredNorm();
  return a.empty() ? 0.0 : std::sqrt(s / static_cast<double>(a.size()));
}

}  // namespace ballpoly
