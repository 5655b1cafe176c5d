// Command-line front end: certify, compare, angles, dual, export, probe.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ballpoly/ballpoly.hpp"
#include "ballpoly/io.hpp"

namespace {

using namespace ballpoly;

constexpr int kExitOk = 0;
constexpr int kExitHypotheses = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitIo = 3;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::CoincidentCenters:
    case ErrorKind::DegenerateTriple:
    case ErrorKind::DegenerateConfiguration:
    case ErrorKind::TangentialEdge:
    case ErrorKind::DegenerateSpan:
    case ErrorKind::Internal: return kExitDegenerate;
    default: return kExitHypotheses;
  }
}

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) std::cout << text;
  else write_file(out, text);
}

int cmd_certify(const std::string& in, const std::string& out) {
  const auto cert = certify(load_center_set(in));
  emit(certificate_json(cert), out);
  if (!out.empty()) std::cerr << cert.verdict << "\n";
  switch (cert.status) {
    case Status::Certified: return kExitOk;
    case Status::Degenerate: return kExitDegenerate;
    case Status::HypothesesNotMet: return kExitHypotheses;
  }
  return kExitHypotheses;
}

int cmd_compare(const std::string& a, const std::string& b) {
  const CenterSet ca = load_center_set(a), cb = load_center_set(b);
  const auto r = compare(ca, cb);
  emit(congruence_json(r), "");
  return kExitOk;
}

int cmd_angles(const std::string& in) {
  const CenterSet c = reduce(load_center_set(in));
  const BallPolyhedron p = build(c);
  Json j;
  j["labels"] = c.labels();
  j["dihedral_angles"] = Json::array();
  for (const auto& a : all_dihedrals(p)) {
    const auto& e = p.edges[static_cast<std::size_t>(a.edge)];
    j["dihedral_angles"].push_back({{"edge", {c.labels()[static_cast<std::size_t>(e.ball_a)],
                                              c.labels()[static_cast<std::size_t>(e.ball_b)]}},
                                    {"center_distance", num15((c[static_cast<std::size_t>(e.ball_a)] -
                                                              c[static_cast<std::size_t>(e.ball_b)]).norm())},
                                    {"radians", num15(a.radians)}});
  }
  j["face_angles"] = Json::array();
  for (const auto& a : all_face_angles(p)) {
    Json balls = Json::array();
    for (int b : p.vertices[static_cast<std::size_t>(a.vertex)].balls) balls.push_back(c.labels()[static_cast<std::size_t>(b)]);
    j["face_angles"].push_back(
        {{"vertex", balls}, {"face", c.labels()[static_cast<std::size_t>(a.face)]}, {"radians", num15(a.radians)}});
  }
  emit(j, "");
  return kExitOk;
}

int cmd_dual(const std::string& in, const std::string& out) {
  const BallPolyhedron p = build(reduce(load_center_set(in)));
  const BallPolyhedron d = dual(p);
  emit(center_set_json(d.centers), out);
  if (!out.empty()) {
    const auto f = d.f_vector();
    std::cerr << "dual f-vector (" << f[0] << ", " << f[1] << ", " << f[2] << "), lattices anti-isomorphic\n";
  }
  return kExitOk;
}

int cmd_export(const std::string& in, const std::string& what, int depth, const std::string& out) {
  const CenterSet c = load_center_set(in);
  TriangleMesh mesh;
  if (what == "q") mesh = q_boundary_mesh(polyhedron_q(c));
  else if (what == "boundary") mesh = p_vertex_polygon_mesh(build(reduce(c)));
  else mesh = p_boundary_mesh(build(reduce(c)), depth);
  write_off(mesh, out);
  return kExitOk;
}

int cmd_probe(const std::string& in, int trials, double magnitude, std::uint64_t seed) {
  const auto r = perturbation_probe(load_center_set(in), trials, magnitude, seed);
  emit(probe_json(r), "");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ball-polyhedron local rigidity toolkit"};
  app.require_subcommand(1);

  std::string in, in_b, out, what = "q";
  int depth = 3, trials = 100;
  double magnitude = 1e-3;
  std::uint64_t seed = 1;

  auto* certify_cmd = app.add_subcommand("certify", "Certify local rigidity of a center set");
  certify_cmd->add_option("input", in, "Input JSON")->required();
  certify_cmd->add_option("-o,--output", out, "Certificate JSON (default stdout)");

  auto* compare_cmd = app.add_subcommand("compare", "Compare two center sets for congruence");
  compare_cmd->add_option("a", in, "First input JSON")->required();
  compare_cmd->add_option("b", in_b, "Second input JSON")->required();

  auto* angles_cmd = app.add_subcommand("angles", "List dihedral and face angles");
  angles_cmd->add_option("input", in, "Input JSON")->required();

  auto* dual_cmd = app.add_subcommand("dual", "Write the dual center set");
  dual_cmd->add_option("input", in, "Input JSON")->required();
  dual_cmd->add_option("-o,--output", out, "Dual center set JSON (default stdout)");

  auto* export_cmd = app.add_subcommand("export", "Export a triangle mesh in OFF format");
  export_cmd->add_option("input", in, "Input JSON")->required();
  export_cmd->add_option("--what", what, "q | boundary | p-mesh")
      ->check(CLI::IsMember({"q", "boundary", "p-mesh"}));
  export_cmd->add_option("--depth", depth, "Subdivision depth of the p-mesh")->check(CLI::Range(0, 10));
  export_cmd->add_option("-o,--output", out, "Output OFF file")->required();

  auto* probe_cmd = app.add_subcommand("probe", "Perturbation probe of local rigidity");
  probe_cmd->add_option("input", in, "Input JSON")->required();
  probe_cmd->add_option("--trials", trials, "Number of trials")->check(CLI::NonNegativeNumber);
  probe_cmd->add_option("--magnitude", magnitude, "Perturbation norm")->check(CLI::NonNegativeNumber);
  probe_cmd->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (*certify_cmd) return cmd_certify(in, out);
    if (*compare_cmd) return cmd_compare(in, in_b);
    if (*angles_cmd) return cmd_angles(in);
    if (*dual_cmd) return cmd_dual(in, out);
    if (*export_cmd) return cmd_export(in, what, depth, out);
    if (*probe_cmd) return cmd_probe(in, trials, magnitude, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}
