#pragma once

#include <stdexcept>
#include <string>

namespace ballpoly {

/// Numerical tolerances shared by every predicate.
///
/// `eps_geom` is an absolute length tolerance; `eps_rank` is the relative
/// singular-value threshold used by rank decisions.
struct Tolerance {
  double eps_geom = 1e-9;
  double eps_rank = 1e-8;

  void validate() const {
    if (!(eps_geom > 0.0 && eps_geom < 1e-3))
      throw std::invalid_argument("eps_geom must lie in (0, 1e-3)");
    if (!(eps_rank > 0.0 && eps_rank < 1e-3))
      throw std::invalid_argument("eps_rank must lie in (0, 1e-3)");
  }
};

enum class ErrorKind {
  CoincidentCenters,
  DegenerateTriple,
  NotBallPolyhedron,
  NotReduced,
  DegenerateConfiguration,
  TangentialEdge,
  Domain,
  Precondition,
  DualityCheckFailed,
  NoThreeCell,
  DegenerateSpan,
  ComplementNotConvex,
  NoLatticeIsomorphism,
  Internal,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CoincidentCenters: return "coincident centers";
    case ErrorKind::DegenerateTriple: return "degenerate triple";
    case ErrorKind::NotBallPolyhedron: return "not a ball-polyhedron";
    case ErrorKind::NotReduced: return "not reduced";
    case ErrorKind::DegenerateConfiguration: return "degenerate configuration";
    case ErrorKind::TangentialEdge: return "tangential edge";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::DualityCheckFailed: return "duality check failed";
    case ErrorKind::NoThreeCell: return "no 3-cell";
    case ErrorKind::DegenerateSpan: return "degenerate span";
    case ErrorKind::ComplementNotConvex: return "complement cell not convex";
    case ErrorKind::NoLatticeIsomorphism: return "no lattice isomorphism";
    case ErrorKind::Internal: return "internal consistency error";
    case ErrorKind::Io: return "I/O error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  explicit Error(ErrorKind kind, const std::string& detail = {})
      : std::runtime_error(detail.empty() ? std::string(to_string(kind))
                                          : std::string(to_string(kind)) + ": " + detail),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ballpoly
