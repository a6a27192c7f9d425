#include "chemofv/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace chemofv {

namespace {

struct Key {
  const char* section;
  const char* name;
};

// Key names are unique across sections, so a key may also be given without its section.
constexpr Key kKeys[] = {
    {"run", "preset"},        {"run", "name"},          {"run", "testcase"},
    {"mesh", "kind"},         {"mesh", "cells"},        {"mesh", "left"},
    {"mesh", "right"},        {"mesh", "radius"},       {"mesh", "boundary_vertices"},
    {"mesh", "smoothing"},    {"mesh", "edge"},         {"mesh", "rows"},
    {"mesh", "path"},         {"model", "epsilon"},     {"model", "delta"},
    {"model", "beta"},        {"model", "motility"},    {"model", "c"},
    {"model", "k"},           {"time", "dt"},           {"time", "t_final"},
    {"time", "dt_initial"},   {"time", "t_switch"},     {"initial", "profile"},
    {"initial", "u"},         {"initial", "v"},         {"initial", "mu"},
    {"initial", "mu_factor"}, {"initial", "amplitude"}, {"initial", "seed"},
    {"study", "levels"},      {"study", "reference"},   {"study", "epsilons"},
    {"study", "preparations"}, {"study", "cases"},      {"output", "out"},
    {"output", "stride"},     {"output", "snapshots"},  {"output", "vtk"},
};

constexpr const char* kRequired[] = {"kind", "epsilon", "delta", "beta", "dt", "t_final"};

using Flat = std::map<std::string, std::string>;

const Key* find_key(const std::string& name) {
  for (const Key& k : kKeys)
    if (name == k.name) return &k;
  return nullptr;
}

Flat flatten(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::invalid_argument(fmt::format("config line {}: {}", e.line(), e.message()));
  }
  Flat flat;
  auto put = [&](std::string section, std::string name, const std::string& value) {
    if (const auto dot = name.find('.'); section.empty() && dot != std::string::npos) {
      section = name.substr(0, dot);
      name = name.substr(dot + 1);
    }
    const Key* k = find_key(name);
    if (!k) throw std::invalid_argument(fmt::format("unknown config key '{}'", name));
    if (!section.empty() && section != k->section)
      throw std::invalid_argument(
          fmt::format("config key '{}' belongs to section [{}], not [{}]", name, k->section, section));
    if (!flat.emplace(name, value).second)
      throw std::invalid_argument(fmt::format("duplicate config key '{}'", name));
  };
  for (const auto& [name, child] : tree) {
    if (child.empty()) {
      const bool section_name = std::any_of(std::begin(kKeys), std::end(kKeys),
                                            [&](const Key& k) { return name == k.section; });
      if (section_name && child.data().empty()) continue;
      put("", name, child.data());
    } else {
      if (!std::any_of(std::begin(kKeys), std::end(kKeys),
                       [&](const Key& k) { return name == k.section; }))
        throw std::invalid_argument(fmt::format("unknown config section [{}]", name));
      for (const auto& [key, value] : child) put(name, key, value.data());
    }
  }
  return flat;
}

template <class T>
T as(const Flat& f, const std::string& key) {
  const std::string& s = f.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (s == "true" || s == "1" || s == "yes") return true;
      if (s == "false" || s == "0" || s == "no") return false;
      throw boost::bad_lexical_cast();
    } else {
      return boost::lexical_cast<T>(s);
    }
  } catch (const boost::bad_lexical_cast&) {
    throw std::invalid_argument(fmt::format("config key '{}': cannot read '{}'", key, s));
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::vector<T> as_list(const Flat& f, const std::string& key) {
  std::vector<T> out;
  for (const std::string& item : split_list(f.at(key))) {
    try {
      out.push_back(boost::lexical_cast<T>(item));
    } catch (const boost::bad_lexical_cast&) {
      throw std::invalid_argument(fmt::format("config key '{}': cannot read '{}'", key, item));
    }
  }
  return out;
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string join(const std::vector<double>& v) {
  std::vector<std::string> s;
  for (double x : v) s.push_back(num(x));
  return fmt::format("{}", fmt::join(s, ","));
}

const char* mesh_kind_name(MeshSpec::Kind k) {
  switch (k) {
    case MeshSpec::Kind::interval: return "interval";
    case MeshSpec::Kind::disk: return "disk";
    case MeshSpec::Kind::square: return "square";
    case MeshSpec::Kind::gmsh: return "gmsh";
  }
  return "?";
}

RunConfig build(const Flat& f, bool full_scale) {
  std::vector<std::string> missing;
  for (const char* k : kRequired)
    if (!f.count(k)) missing.emplace_back(k);
  if (!missing.empty())
    throw std::invalid_argument(
        fmt::format("config is missing required keys: {}", fmt::join(missing, ", ")));

  RunConfig c;
  c.full_scale = full_scale;
  auto has = [&](const char* k) { return f.count(k) > 0; };
  if (has("name")) c.name = f.at("name");
  if (has("testcase")) c.testcase = as<int>(f, "testcase");
  if (c.testcase < 0 || c.testcase > 4) throw std::invalid_argument("testcase must be 0 to 4");

  const std::string kind = f.at("kind");
  if (kind == "interval") c.mesh.kind = MeshSpec::Kind::interval;
  else if (kind == "disk") c.mesh.kind = MeshSpec::Kind::disk;
  else if (kind == "square") c.mesh.kind = MeshSpec::Kind::square;
  else if (kind == "gmsh") c.mesh.kind = MeshSpec::Kind::gmsh;
  else throw std::invalid_argument(fmt::format("unknown mesh kind '{}'", kind));
  if (has("cells")) c.mesh.cells = as<int>(f, "cells");
  if (has("left")) c.mesh.left = as<double>(f, "left");
  if (has("right")) c.mesh.right = as<double>(f, "right");
  if (has("radius")) c.mesh.radius = as<double>(f, "radius");
  if (has("boundary_vertices")) c.mesh.boundary_vertices = as<int>(f, "boundary_vertices");
  if (has("smoothing")) c.mesh.smoothing = as<int>(f, "smoothing");
  if (has("edge")) c.mesh.edge = as<double>(f, "edge");
  if (has("rows")) c.mesh.rows = as<int>(f, "rows");
  if (has("path")) c.mesh.path = f.at("path");
  if (c.mesh.kind == MeshSpec::Kind::gmsh) {
    if (c.mesh.path.empty()) throw std::invalid_argument("gmsh mesh needs a path");
    if (!std::filesystem::exists(c.mesh.path))
      throw std::invalid_argument(fmt::format("mesh file {} does not exist", c.mesh.path.string()));
  }

  c.epsilon = as<double>(f, "epsilon");
  c.delta = as<double>(f, "delta");
  c.beta = as<double>(f, "beta");
  const std::string mot = has("motility") ? f.at("motility") : "exponential";
  if (mot == "exponential") {
    c.motility = Motility::exponential();
  } else if (mot == "algebraic") {
    c.motility = Motility::algebraic(has("c") ? as<double>(f, "c") : 1.0,
                                     has("k") ? as<double>(f, "k") : 2.0);
  } else {
    throw std::invalid_argument(fmt::format("unknown motility '{}'", mot));
  }

  c.dt = as<double>(f, "dt");
  c.t_final = as<double>(f, "t_final");
  if (has("dt_initial")) c.dt_initial = as<double>(f, "dt_initial");
  if (has("t_switch")) c.t_switch = as<double>(f, "t_switch");

  if (has("profile")) c.initial.kind = f.at("profile");
  static const std::vector<std::string> profiles = {"expression", "swp", "wp", "ip",
                                                    "j1",         "j3",  "random"};
  if (std::find(profiles.begin(), profiles.end(), c.initial.kind) == profiles.end())
    throw std::invalid_argument(fmt::format("unknown initial profile '{}'", c.initial.kind));
  if (has("u")) c.initial.u = f.at("u");
  if (has("v")) c.initial.v = f.at("v");
  if (has("mu")) c.initial.mu = as<double>(f, "mu");
  if (has("mu_factor")) c.initial.mu_factor = as<double>(f, "mu_factor");
  if (has("amplitude")) c.initial.amplitude = as<double>(f, "amplitude");
  if (has("seed")) c.initial.seed = as<std::uint64_t>(f, "seed");

  if (has("levels")) c.study.levels = as_list<int>(f, "levels");
  if (has("reference")) c.study.reference = as<int>(f, "reference");
  if (has("epsilons")) c.study.epsilons = as_list<double>(f, "epsilons");
  if (has("preparations")) c.study.preparations = split_list(f.at("preparations"));
  if (has("cases")) c.study.cases = split_list(f.at("cases"));

  if (has("out")) c.output.dir = f.at("out");
  if (has("stride")) c.output.stride = as<long>(f, "stride");
  if (has("snapshots")) c.output.snapshots = as_list<double>(f, "snapshots");
  if (has("vtk")) c.output.vtk = as<bool>(f, "vtk");
  if (c.output.stride < 1) throw std::invalid_argument("stride must be at least 1");

  c.params().validate();
  return c;
}

Flat resolve_presets(Flat f, bool full_scale) {
  auto it = f.find("preset");
  if (it == f.end()) return f;
  Flat base = flatten(preset_text(it->second, full_scale));
  f.erase(it);
  for (auto& [k, v] : f) base[k] = v;
  return base;
}

}  // namespace

TimeSchedule RunConfig::schedule() const {
  if (dt_initial > 0.0) return TimeSchedule::two_phase(dt_initial, t_switch, dt, t_final);
  return TimeSchedule::constant(dt, t_final);
}

SchemeParams RunConfig::params() const {
  SchemeParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.beta = beta;
  p.motility = motility;
  p.schedule = schedule();
  return p;
}

std::map<std::string, std::string> RunConfig::resolved() const {
  std::map<std::string, std::string> r;
  r["run.name"] = name;
  r["run.testcase"] = std::to_string(testcase);
  r["mesh.kind"] = mesh_kind_name(mesh.kind);
  r["mesh.cells"] = std::to_string(mesh.cells);
  r["mesh.left"] = num(mesh.left);
  r["mesh.right"] = num(mesh.right);
  r["mesh.radius"] = num(mesh.radius);
  r["mesh.boundary_vertices"] = std::to_string(mesh.boundary_vertices);
  r["mesh.smoothing"] = std::to_string(mesh.smoothing);
  r["mesh.edge"] = num(mesh.edge);
  r["mesh.rows"] = std::to_string(mesh.rows);
  if (!mesh.path.empty()) r["mesh.path"] = mesh.path.string();
  r["model.epsilon"] = num(epsilon);
  r["model.delta"] = num(delta);
  r["model.beta"] = num(beta);
  r["model.motility"] =
      motility.kind == Motility::Kind::exponential ? "exponential" : "algebraic";
  r["model.c"] = num(motility.c);
  r["model.k"] = num(motility.k);
  r["time.dt"] = num(dt);
  r["time.t_final"] = num(t_final);
  r["time.dt_initial"] = num(dt_initial);
  r["time.t_switch"] = num(t_switch);
  r["initial.profile"] = initial.kind;
  r["initial.u"] = initial.u;
  r["initial.v"] = initial.v;
  r["initial.mu"] = num(initial.mu);
  r["initial.mu_factor"] = num(initial.mu_factor);
  r["initial.amplitude"] = num(initial.amplitude);
  r["initial.seed"] = std::to_string(initial.seed);
  {
    std::vector<std::string> lv;
    for (int l : study.levels) lv.push_back(std::to_string(l));
    r["study.levels"] = fmt::format("{}", fmt::join(lv, ","));
  }
  r["study.reference"] = std::to_string(study.reference);
  r["study.epsilons"] = join(study.epsilons);
  r["study.preparations"] = fmt::format("{}", fmt::join(study.preparations, ","));
  r["study.cases"] = fmt::format("{}", fmt::join(study.cases, ","));
  r["output.out"] = output.dir.string();
  r["output.stride"] = std::to_string(output.stride);
  r["output.snapshots"] = join(output.snapshots);
  r["output.vtk"] = output.vtk ? "true" : "false";
  return r;
}

std::vector<std::string> preset_names() {
  return {"testcase1", "testcase2", "testcase3", "testcase4"};
}

std::string preset_text(const std::string& name, bool full_scale) {
  if (name == "testcase1") {
    return fmt::format(R"([run]
name = testcase1
testcase = 1
[mesh]
kind = interval
cells = {}
[model]
epsilon = 1e-3
delta = 1e-3
beta = 0.1
[time]
dt = {}
t_final = 20
[initial]
profile = ip
u = 15*x^2*(1-x)^2
v = 0
[study]
levels = {}
reference = {}
[output]
stride = 100
)",
                       full_scale ? 3200 : 800, full_scale ? "1e-4" : "1e-3",
                       full_scale ? "50,100,200,400,800" : "50,100,200,400",
                       full_scale ? 3200 : 800);
  }
  if (name == "testcase2") {
    return fmt::format(R"([run]
name = testcase2
testcase = 2
[mesh]
kind = interval
cells = {}
[model]
epsilon = 0.1
delta = 1e-3
beta = 0.1
[time]
dt_initial = {}
t_switch = 1e-2
dt = 1e-2
t_final = 100
[initial]
profile = ip
u = 15*x^2*(1-x)^2
[study]
epsilons = 1e-1,1e-2,1e-3,1e-4,1e-5,1e-6
preparations = swp,wp,ip
[output]
stride = 1000
)",
                       full_scale ? 3200 : 100, full_scale ? "1e-8" : "1e-7");
  }
  if (name == "testcase3") {
    return fmt::format(R"([run]
name = testcase3
testcase = 3
[mesh]
kind = disk
radius = 1
boundary_vertices = {}
[model]
epsilon = 1
delta = 1
beta = 3.39001744
[time]
dt = 0.1
t_final = {}
[initial]
profile = j1
mu_factor = 0.9
amplitude = 0.1
[study]
cases = a,b,c
[output]
stride = 10
snapshots = {}
)",
                       full_scale ? 252 : 60, full_scale ? 50000 : 2000,
                       full_scale ? "0,20,2000,5000,50000" : "0,20,200,1000,2000");
  }
  if (name == "testcase4") {
    return fmt::format(R"([run]
name = testcase4
testcase = 4
[mesh]
kind = square
edge = 10
rows = {}
[model]
epsilon = 1
delta = 0.04086664532519633
beta = 1
motility = algebraic
c = 1
k = 2
[time]
dt = 0.1
t_final = {}
[initial]
profile = random
mu = 4
seed = 20240917
[output]
stride = 10
snapshots = {}
)",
                       full_scale ? 86 : 38, full_scale ? 20000 : 2000,
                       full_scale ? "0,25,50,75,100,200,300,500,1000,2000,4000,8000,20000"
                                   : "0,25,50,75,100,200,300,500,1000,2000");
  }
  throw std::invalid_argument(fmt::format("unknown preset '{}'", name));
}

RunConfig parse_config_string(const std::string& text, bool full_scale) {
  return build(resolve_presets(flatten(text), full_scale), full_scale);
}

RunConfig parse_config(const std::filesystem::path& path, bool full_scale) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(fmt::format("cannot read config {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str(), full_scale);
}

RunConfig load_config(const std::string& preset_or_path, bool full_scale) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), preset_or_path) != names.end())
    return parse_config_string("preset = " + preset_or_path, full_scale);
  return parse_config(preset_or_path, full_scale);
}

RunConfig apply_overrides(const RunConfig& base, const std::vector<std::string>& assignments) {
  Flat f;
  for (const auto& [k, v] : base.resolved()) f[k.substr(k.find('.') + 1)] = v;
  if (f["path"].empty()) f.erase("path");
  std::string text;
  for (const std::string& a : assignments) text += a + "\n";
  for (auto& [k, v] : flatten(text)) {
    if (k == "preset") throw std::invalid_argument("a preset cannot be applied as an override");
    f[k] = v;
  }
  return build(f, base.full_scale);
}

}  // namespace chemofv
