#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "chemofv/diagnostics.hpp"
#include "chemofv/experiments.hpp"
#include "chemofv/generators.hpp"
#include "chemofv/linsolve.hpp"

using namespace chemofv;

namespace {

struct Common {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_final;
  bool full_scale = false;
  std::vector<std::string> set;
  bool dry_run = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--seed", c.seed, "Seed of the random initial data");
  app->add_option("--dt", c.dt, "Time step (the second phase of a two-phase schedule)");
  app->add_option("--tfinal", c.t_final, "Final time");
  app->add_flag("--full-scale", c.full_scale, "Use the full-size preset parameters");
  app->add_option("--set", c.set, "Extra key=value override, repeatable");
  app->add_flag("--dry-run", c.dry_run, "Print the resolved parameters and exit");
}

RunConfig resolve(const std::string& source, const Common& c) {
  RunConfig config = load_config(source, c.full_scale);
  std::vector<std::string> ov = c.set;
  if (!c.out.empty()) ov.push_back("out = " + c.out);
  if (c.seed) ov.push_back(fmt::format("seed = {}", *c.seed));
  if (c.dt) ov.push_back(fmt::format("dt = {:.17g}", *c.dt));
  if (c.t_final) ov.push_back(fmt::format("t_final = {:.17g}", *c.t_final));
  if (!ov.empty()) config = apply_overrides(config, ov);
  if (config.output.dir.empty()) config.output.dir = std::filesystem::path("out") / config.name;
  return config;
}

int run_config(const RunConfig& config, bool dry_run) {
  if (dry_run) {
    for (const auto& [k, v] : config.resolved()) fmt::print("{} = {}\n", k, v);
    return 0;
  }
  execute(config);
  fmt::print("outputs written to {}\n", config.output.dir.string());
  return 0;
}

/// "disk[:boundary_vertices]", "square[:rows]", "interval[:cells]" or a Gmsh file.
MeshSpec mesh_spec(const std::string& arg) {
  MeshSpec s;
  if (std::filesystem::exists(arg)) {
    s.kind = MeshSpec::Kind::gmsh;
    s.path = arg;
    return s;
  }
  const auto colon = arg.find(':');
  const std::string kind = arg.substr(0, colon);
  const std::optional<int> n =
      colon == std::string::npos ? std::nullopt : std::optional<int>(std::stoi(arg.substr(colon + 1)));
  if (kind == "disk") {
    s.kind = MeshSpec::Kind::disk;
    if (n) s.boundary_vertices = *n;
  } else if (kind == "square") {
    s.kind = MeshSpec::Kind::square;
    if (n) s.rows = *n;
  } else if (kind == "interval") {
    s.kind = MeshSpec::Kind::interval;
    if (n) s.cells = *n;
  } else {
    throw std::invalid_argument(
        fmt::format("'{}' is neither a mesh file nor disk[:n], square[:n], interval[:n]", arg));
  }
  return s;
}

Mesh load_mesh(const MeshSpec& s, std::optional<Triangulation>* tri = nullptr) {
  if (s.kind == MeshSpec::Kind::interval) return build_uniform_1d(s.left, s.right, s.cells);
  Triangulation t;
  switch (s.kind) {
    case MeshSpec::Kind::disk: t = disk_mesh(s.radius, s.boundary_vertices, s.smoothing); break;
    case MeshSpec::Kind::square: t = square_mesh(s.edge, s.rows); break;
    default: t = load_gmsh(s.path); break;
  }
  Mesh m = build_from_triangulation(t.vertices, t.triangles);
  if (tri) *tri = std::move(t);
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite volume solver for local sensing chemotaxis"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress");

  Common run_opts, conv_opts, sweep_opts;
  std::string run_source, conv_source = "testcase1", sweep_source = "testcase2";

  auto* run = app.add_subcommand("run", "Run a preset or a config file");
  run->add_option("config", run_source, "Preset name or config path")->required();
  add_common(run, run_opts);

  auto* conv = app.add_subcommand("converge", "Space convergence study in 1D");
  conv->add_option("config", conv_source, "Preset name or config path");
  add_common(conv, conv_opts);

  auto* sweep = app.add_subcommand("sweep-eps", "Sweep of epsilon against the limit model");
  sweep->add_option("config", sweep_source, "Preset name or config path");
  add_common(sweep, sweep_opts);

  std::string eigen_mesh, check_mesh;
  double check_zeta = kMinZeta;
  auto* eigen = app.add_subcommand("eigen", "First nonzero eigenvalue of the FV Laplacian");
  eigen->add_option("mesh", eigen_mesh, "Gmsh file or disk[:n], square[:n], interval[:n]")->required();

  auto* check = app.add_subcommand("check-mesh", "Admissibility and quality report of a mesh");
  check->add_option("mesh", check_mesh, "Gmsh file or disk[:n], square[:n], interval[:n]")->required();
  check->add_option("--zeta", check_zeta, "Smallest accepted distance ratio");

  auto* presets = app.add_subcommand("presets", "List the shipped presets");
  std::string show;
  presets->add_option("name", show, "Print the text of one preset");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    if (*run) return run_config(resolve(run_source, run_opts), run_opts.dry_run);
    if (*conv) {
      RunConfig c = resolve(conv_source, conv_opts);
      if (c.testcase != 1) throw std::invalid_argument("converge needs a testcase 1 config");
      return run_config(c, conv_opts.dry_run);
    }
    if (*sweep) {
      RunConfig c = resolve(sweep_source, sweep_opts);
      if (c.testcase != 2) throw std::invalid_argument("sweep-eps needs a testcase 2 config");
      return run_config(c, sweep_opts.dry_run);
    }
    if (*eigen) {
      const Mesh mesh = load_mesh(mesh_spec(eigen_mesh));
      const EigenResult r = smallest_nonzero_eigenpair(mesh);
      fmt::print("cells {}\nlambda1 {:.12g}\niterations {}\nresidual {:.3e}\n", mesh.num_cells(),
                 r.value, r.iterations, r.residual);
      return 0;
    }
    if (*check) {
      std::optional<Triangulation> tri;
      const Mesh mesh = load_mesh(mesh_spec(check_mesh), &tri);
      const AdmissibilityReport rep = check_admissibility(mesh, check_zeta);
      fmt::print("cells {}\nedges {} ({} interior)\nsize {:.6g}\nconnected {}\n", mesh.num_cells(),
                 mesh.num_edges(), mesh.num_interior_edges(), mesh.size(), mesh.connected());
      if (tri) fmt::print("max angle {:.3f} deg\n", max_angle_degrees(*tri));
      fmt::print("worst ratio {:.6g}\noffending {}\nadmissible {}\n", rep.worst_ratio,
                 rep.offending_edges.size(), rep.ok ? "yes" : "no");
      return rep.ok ? 0 : 2;
    }
    if (*presets) {
      if (!show.empty()) {
        fmt::print("{}", preset_text(show));
      } else {
        for (const auto& n : preset_names()) fmt::print("{}\n", n);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
