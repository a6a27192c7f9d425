#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chemofv/scheme.hpp"

namespace chemofv {

struct MeshSpec {
  enum class Kind { interval, disk, square, gmsh };
  Kind kind = Kind::interval;
  int cells = 100;
  double left = 0.0;
  double right = 1.0;
  double radius = 1.0;
  int boundary_vertices = 60;
  int smoothing = 50;
  double edge = 10.0;
  int rows = 38;
  std::filesystem::path path;
};

struct InitialSpec {
  /// expression | swp | wp | ip | j1 | j3 | random
  std::string kind = "expression";
  std::string u = "15*x^2*(1-x)^2";
  std::string v = "0";
  double mu = 0.0;
  /// When positive, mu = mu_factor * (beta + delta lambda_1) with the mesh eigenvalue.
  double mu_factor = 0.0;
  double amplitude = 0.1;
  std::uint64_t seed = 1;
};

struct StudySpec {
  std::vector<int> levels;
  int reference = 0;
  std::vector<double> epsilons;
  std::vector<std::string> preparations;
  std::vector<std::string> cases;
};

struct OutputSpec {
  std::filesystem::path dir;
  long stride = 1;
  std::vector<double> snapshots;
  bool vtk = true;
};

struct RunConfig {
  std::string name = "custom";
  int testcase = 0;  ///< 0 for a plain run
  bool full_scale = false;
  MeshSpec mesh;
  double epsilon = 1.0;
  double delta = 1.0;
  double beta = 1.0;
  Motility motility;
  double dt = 0.0;
  double t_final = 0.0;
  double dt_initial = 0.0;  ///< first-phase step, 0 for a constant schedule
  double t_switch = 0.0;
  InitialSpec initial;
  StudySpec study;
  OutputSpec output;

  TimeSchedule schedule() const;
  SchemeParams params() const;
  /// Every key with its resolved value, in "section.key" form.
  std::map<std::string, std::string> resolved() const;
};

/// Names of the shipped presets.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name, bool full_scale = false);

/// Parses key = value text with optional [section] headers. A "preset" key pulls in a shipped
/// preset, which the remaining keys override. Unknown, duplicate and missing keys are errors.
RunConfig parse_config_string(const std::string& text, bool full_scale = false);
RunConfig parse_config(const std::filesystem::path& path, bool full_scale = false);
/// A preset name or a path to a config file.
RunConfig load_config(const std::string& preset_or_path, bool full_scale = false);

/// Applies "key = value" (or "section.key = value") on top of an existing config.
RunConfig apply_overrides(const RunConfig& base, const std::vector<std::string>& assignments);

}  // namespace chemofv
