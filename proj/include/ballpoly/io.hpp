#pragma once

// JSON input files and JSON renderings of certificates and reports.
// Requires nlohmann/json (json.hpp) on the include path.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ballpoly/pipeline.hpp"

namespace ballpoly {

using Json = nlohmann::ordered_json;

/// Parses {"centers": [[x,y,z],...], "labels": [...], "tolerance": {...}}.
inline CenterSet parse_center_set(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Io, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("centers") || !j["centers"].is_array())
    throw Error(ErrorKind::Io, "input must be an object with a \"centers\" array");
  try {
    std::vector<Point3> centers;
    for (const auto& c : j["centers"]) {
      if (!c.is_array() || c.size() != 3) throw Error(ErrorKind::Io, "each center must be [x, y, z]");
      for (const auto& x : c)
        if (!x.is_number()) throw Error(ErrorKind::Io, "center coordinates must be numbers");
      centers.emplace_back(c[0].get<double>(), c[1].get<double>(), c[2].get<double>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels") && !j["labels"].is_null()) labels = j["labels"].get<std::vector<std::string>>();
    Tolerance tol;
    if (j.contains("tolerance")) {
      const auto& t = j["tolerance"];
      if (!t.is_object()) throw Error(ErrorKind::Io, "\"tolerance\" must be an object");
      tol.eps_geom = t.value("eps_geom", tol.eps_geom);
      tol.eps_rank = t.value("eps_rank", tol.eps_rank);
    }
    return CenterSet(std::move(centers), std::move(labels), tol);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Io, std::string("bad input field: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorKind::Io, e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline CenterSet load_center_set(const std::string& path) { return parse_center_set(read_file(path)); }

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorKind::Io, "failed writing " + path);
}

/// Number rounded to 15 significant digits, so output bytes do not depend on
/// the last bits of a computation.
inline Json num15(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

inline Json center_set_json(const CenterSet& c) {
  Json j;
  j["centers"] = Json::array();
  for (const auto& p : c.points()) j["centers"].push_back({num15(p.x()), num15(p.y()), num15(p.z())});
  j["labels"] = c.labels();
  j["tolerance"] = {{"eps_geom", c.tolerance().eps_geom}, {"eps_rank", c.tolerance().eps_rank}};
  return j;
}

inline Json check_json(const Check& c) {
  Json j{{"evaluated", c.evaluated}, {"passed", c.passed}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

inline Json certificate_json(const RigidityCertificate& c) {
  Json j;
  j["input_hash"] = c.input_hash;
  j["input_center_count"] = c.input_count;
  j["reduced_center_count"] = c.reduced_count;
  j["reduced_labels"] = c.reduced_labels;
  j["flags"] = {{"has_interior", c.has_interior}, {"reduced", c.reduced}, {"simple", c.simple}, {"standard", c.standard}};
  j["f_vector"] = c.f_vector;
  j["dihedral_angles"] = Json::array();
  for (const auto& a : c.dihedrals)
    j["dihedral_angles"].push_back({{"edge", {a.ball_a, a.ball_b}}, {"radians", num15(a.radians)}});
  j["q"] = {{"delaunay_cells_by_dimension", c.q.delaunay_cells},
            {"truncated_cells_by_dimension", c.q.truncated_cells},
            {"q_cells", c.q.q_cells},
            {"interior_faces", c.q.interior_faces},
            {"boundary_f_vector", c.q.boundary_f_vector},
            {"volume", num15(c.q.volume)},
            {"hull_volume", num15(c.q.hull_volume)}};
  j["checks"] = {{"voronoi_delaunay_correspondence", check_json(c.voronoi_delaunay_correspondence)},
                 {"no_boundary_voronoi_vertex", check_json(c.no_boundary_voronoi_vertex)},
                 {"subcomplex", check_json(c.subcomplex)},
                 {"boundary_triangle_bijection", check_json(c.boundary_triangle_bijection)},
                 {"nerve_isomorphism", check_json(c.nerve_isomorphism)},
                 {"two_sphere", check_json(c.two_sphere)},
                 {"weakly_convex", check_json(c.weakly_convex)},
                 {"codecomposable", check_json(c.codecomposable)}};
  const auto& r = c.rigidity;
  j["rigidity"] = {{"evaluated", r.evaluated},
                   {"joints", r.joints},
                   {"bars", r.bars},
                   {"rank", r.rank},
                   {"nullity", r.nullity},
                   {"rigid", r.rigid},
                   {"ill_conditioned", r.ill_conditioned},
                   {"threshold", num15(r.threshold)},
                   {"smallest_kept_singular_value", num15(r.smallest_kept_singular_value)}};
  j["failures"] = c.failures;
  j["notes"] = c.notes;
  j["status"] = to_string(c.status);
  j["verdict"] = c.verdict;
  return j;
}

inline Json congruence_json(const CongruenceReport& r) {
  Json j;
  j["isomorphic"] = r.isomorphic;
  j["face_map"] = r.mapping.face;
  j["isomorphisms_examined"] = r.isomorphisms_examined;
  j["dihedral_max_deviation"] = num15(r.dihedral_max_deviation);
  j["hausdorff_max"] = num15(r.hausdorff_max);
  Json rot = Json::array();
  for (int i = 0; i < 3; ++i)
    rot.push_back({num15(r.isometry.rotation(i, 0)), num15(r.isometry.rotation(i, 1)), num15(r.isometry.rotation(i, 2))});
  j["isometry"] = {{"rotation", rot},
                   {"translation", {num15(r.isometry.translation.x()), num15(r.isometry.translation.y()),
                                    num15(r.isometry.translation.z())}},
                   {"reflection", r.reflection}};
  j["rms"] = num15(r.rms);
  j["congruent"] = r.congruent;
  return j;
}

inline Json probe_json(const ProbeReport& r) {
  Json j;
  j["trials"] = r.trials.size();
  j["congruent_trials"] = r.congruent_trials;
  j["congruence_tolerance"] = r.congruence_tolerance;
  j["max_rms_to_original"] = num15(r.max_rms);
  j["max_final_residual"] = num15(r.max_final_residual);
  j["results"] = Json::array();
  for (const auto& t : r.trials)
    j["results"].push_back({{"perturbation_norm", num15(t.perturbation_norm)},
                            {"initial_residual", num15(t.initial_residual)},
                            {"final_residual", num15(t.final_residual)},
                            {"iterations", t.iterations},
                            {"rms_to_original", num15(t.rms_to_original)},
                            {"congruent", t.congruent}});
  return j;
}

}  // namespace ballpoly
