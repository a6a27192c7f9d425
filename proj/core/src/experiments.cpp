#include "chemofv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "chemofv/expression.hpp"
#include "chemofv/generators.hpp"
#include "chemofv/quadrature.hpp"
#include "chemofv/snapshot.hpp"
#include "chemofv/special.hpp"

namespace chemofv {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  return f;
}

double mesh_mu(const InitialSpec& in, double mu_c) {
  if (in.mu_factor > 0.0) {
    if (!(mu_c > 0.0)) throw std::invalid_argument("mu_factor needs the stability threshold");
    return in.mu_factor * mu_c;
  }
  if (!(in.mu > 0.0)) throw std::invalid_argument("initial profile needs mu > 0");
  return in.mu;
}

double case_factor(const std::string& label) {
  if (label == "a") return 0.9;
  if (label == "b") return 1.1;
  if (label == "c") return 4.0;
  throw std::invalid_argument(fmt::format("unknown case '{}', expected a, b or c", label));
}

}  // namespace

BuiltMesh build_mesh(const MeshSpec& spec) {
  if (spec.kind == MeshSpec::Kind::interval)
    return {build_uniform_1d(spec.left, spec.right, spec.cells), {}, 0.5};
  Triangulation t;
  switch (spec.kind) {
    case MeshSpec::Kind::disk: t = disk_mesh(spec.radius, spec.boundary_vertices, spec.smoothing); break;
    case MeshSpec::Kind::square: t = square_mesh(spec.edge, spec.rows); break;
    case MeshSpec::Kind::gmsh: t = load_gmsh(spec.path); break;
    case MeshSpec::Kind::interval: break;
  }
  Mesh mesh = build_from_triangulation(t.vertices, t.triangles);
  const AdmissibilityReport adm = check_admissibility(mesh, kMinZeta);
  if (!adm.ok)
    throw std::runtime_error(fmt::format("mesh is not admissible: worst ratio {:.4g}, {} offending edges",
                                         adm.worst_ratio, adm.offending_edges.size()));
  return {std::move(mesh), std::move(t), adm.worst_ratio};
}

State initial_state(const RunConfig& config, const Mesh& mesh, double mu_c) {
  const InitialSpec& in = config.initial;
  const SchemeParams params = config.params();
  State s;
  const std::string& kind = in.kind;
  if (kind == "expression" || kind == "swp" || kind == "wp" || kind == "ip") {
    const Expression u(in.u);
    s.u = project_cell_averages(u, mesh);
    if (kind == "swp") {
      s.v = stationary_v_init(mesh, params, s.u);
    } else if (kind == "wp") {
      s.v = DiscreteField(mesh, mean_value(mesh, s.u) / params.beta);
    } else if (in.v.empty()) {
      s.v = stationary_v_init(mesh, params, s.u);
    } else {
      s.v = project_cell_averages(Expression(in.v), mesh);
    }
  } else if (kind == "j1" || kind == "j3") {
    const double mu = mesh_mu(in, mu_c);
    const double r0 = config.mesh.radius;
    const double amp = in.amplitude;
    s.u = DiscreteField(mesh, mu);
    ScalarFunction f;
    if (kind == "j1") {
      f = [=](Point p) {
        const double r = std::hypot(p.x, p.y);
        const double c = r > 0.0 ? p.x / r : 0.0;
        return mu * (1.0 + amp * c * bessel_j(1, kBesselJ1PrimeRoot * r / r0));
      };
    } else {
      f = [=](Point p) {
        return mu * (1.0 + amp * bessel_j(0, kBesselJ0PrimeRoot * std::hypot(p.x, p.y) / r0));
      };
    }
    s.v = project_cell_averages(f, mesh);
  } else if (kind == "random") {
    const double mu = mesh_mu(in, mu_c);
    Rng rng(in.seed);
    s.u = DiscreteField(mesh, mu);
    s.v = DiscreteField(mesh);
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) s.v[k] = mu * (0.5 + rng.uniform_open());
  } else {
    throw std::invalid_argument(fmt::format("unknown initial profile '{}'", kind));
  }
  if (!s.u.finite() || !s.v.finite()) throw std::invalid_argument("non-finite initial data");
  if (min_value(s.u) < 0.0) throw std::invalid_argument("negative initial density");
  return s;
}

std::vector<double> restrict_average(const std::vector<double>& fine, int coarse_cells) {
  if (coarse_cells <= 0 || fine.size() % static_cast<std::size_t>(coarse_cells) != 0)
    throw std::invalid_argument(
        fmt::format("non-nested levels: {} cells onto {}", fine.size(), coarse_cells));
  const std::size_t f = fine.size() / coarse_cells;
  std::vector<double> out(coarse_cells);
  for (int i = 0; i < coarse_cells; ++i) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < f; ++j) s += fine[i * f + j];
    out[i] = static_cast<double>(s / f);
  }
  return out;
}

ConvergenceReport convergence_report(const std::vector<std::vector<double>>& solutions,
                                     const std::vector<double>& reference, double length) {
  ConvergenceReport rep;
  rep.reference_cells = static_cast<int>(reference.size());
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    const auto& u = solutions[k];
    const int n = static_cast<int>(u.size());
    const std::vector<double> ref = restrict_average(reference, n);
    const double h = length / n;
    long double s = 0.0L;
    double mx = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = u[i] - ref[i];
      s += h * d * d;
      mx = std::max(mx, std::abs(d));
    }
    ConvergenceLevel lv;
    lv.cells = n;
    lv.l2 = std::sqrt(static_cast<double>(s));
    lv.linf = mx;
    if (k > 0) {
      const ConvergenceLevel& prev = rep.levels.back();
      const double ratio = std::log(static_cast<double>(n) / prev.cells);
      if (lv.l2 > 0.0 && prev.l2 > 0.0) lv.order_l2 = std::log(prev.l2 / lv.l2) / ratio;
      if (lv.linf > 0.0 && prev.linf > 0.0) lv.order_linf = std::log(prev.linf / lv.linf) / ratio;
    }
    rep.levels.push_back(lv);
  }
  return rep;
}

void ConvergenceReport::write_csv(std::ostream& out) const {
  out << "k,cells,l2_error,l2_order,linf_error,linf_order\n";
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const ConvergenceLevel& l = levels[k];
    fmt::print(out, "{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", k, l.cells, l.l2, l.order_l2, l.linf,
               l.order_linf);
  }
}

Testcase1Result run_testcase_1(const RunConfig& config) {
  if (config.mesh.kind != MeshSpec::Kind::interval)
    throw std::invalid_argument("testcase 1 runs on an interval");
  const StudySpec& st = config.study;
  if (st.levels.empty()) throw std::invalid_argument("testcase 1 needs convergence levels");
  for (int l : st.levels)
    if (l <= 0 || st.reference <= l || st.reference % l != 0)
      throw std::invalid_argument(
          fmt::format("non-nested levels: {} cells against reference {}", l, st.reference));
  const SchemeParams params = config.params();
  Testcase1Result res;
  std::vector<std::vector<double>> sols;
  std::vector<int> all = st.levels;
  all.push_back(st.reference);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const bool reference = i + 1 == all.size();
    MeshSpec ms = config.mesh;
    ms.cells = all[i];
    const Mesh mesh = build_mesh(ms).mesh;
    const State init = initial_state(config, mesh);
    InvariantMonitor mon(mesh, params, init);
    RunOptions opt;
    opt.stride = config.output.stride;
    opt.dual_norm = reference;
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r = run(init, mesh, params, config.t_final, {mon.observer()}, opt);
    spdlog::info("testcase 1: {} cells in {:.1f} s", all[i],
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    res.monitors.push_back(mon.report());
    if (reference) {
      res.reference_series = std::move(r.series);
      res.report = convergence_report(sols, r.final_state.u.values(),
                                      config.mesh.right - config.mesh.left);
    } else {
      sols.push_back(r.final_state.u.values());
    }
  }
  res.report.dt = config.dt;
  res.report.t_final = config.t_final;
  return res;
}

void Testcase2Result::write_summary_csv(std::ostream& out) const {
  out << "preparation,epsilon,l2_qt,sup_l2,mean_dtv_l2,mean_dtv_closed_form\n";
  for (const ApSummary& s : summary)
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.preparation, s.epsilon,
               s.l2_qt, s.sup_l2, s.mean_dtv, s.closed_form);
}

void Testcase2Result::write_series_csv(std::ostream& out) const {
  out << "preparation,epsilon,t,l2_error\n";
  for (const ApSeriesPoint& p : series)
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g}\n", p.preparation, p.epsilon, p.t, p.error);
}

Testcase2Result run_testcase_2(const RunConfig& config) {
  if (config.mesh.kind != MeshSpec::Kind::interval)
    throw std::invalid_argument("testcase 2 runs on an interval");
  const Mesh mesh = build_mesh(config.mesh).mesh;
  std::vector<double> eps = config.study.epsilons;
  if (eps.empty()) eps.push_back(config.epsilon);
  eps.erase(std::remove(eps.begin(), eps.end(), 0.0), eps.end());
  std::vector<std::string> preps = config.study.preparations;
  if (preps.empty()) preps = {config.initial.kind};
  const TimeSchedule schedule = config.schedule();
  const long stride = config.output.stride;

  Testcase2Result res;
  for (const std::string& prep : preps) {
    RunConfig c = config;
    c.initial.kind = prep;
    // the limit run first, then every epsilon stepped in lockstep with it
    std::vector<double> all{0.0};
    all.insert(all.end(), eps.begin(), eps.end());
    std::vector<SchemeParams> params;
    std::vector<State> states;
    std::vector<std::unique_ptr<Stepper>> steppers;
    std::vector<std::unique_ptr<InvariantMonitor>> monitors;
    for (double e : all) {
      c.epsilon = e;
      params.push_back(c.params());
    }
    const State init = initial_state(c, mesh);
    for (std::size_t i = 0; i < all.size(); ++i) {
      states.push_back(init);
      steppers.push_back(std::make_unique<Stepper>(mesh, params[i]));
      monitors.push_back(std::make_unique<InvariantMonitor>(mesh, params[i], init));
    }
    const double mu0 = mean_value(mesh, init.u), mv0 = mean_value(mesh, init.v);
    std::vector<long double> qt(all.size(), 0.0L), dtv(all.size(), 0.0L);
    std::vector<double> sup(all.size(), 0.0);
    std::vector<double> dts;
    long n = 0;
    const long total = schedule.total_steps();
    for (const TimeSegment& seg : schedule.segments()) {
      for (long i = 0; i < seg.steps; ++i) {
        ++n;
        dts.push_back(seg.dt);
        const bool record = n % stride == 0 || n == total || (n < stride && (n & (n - 1)) == 0);
        for (std::size_t j = 0; j < all.size(); ++j) {
          State next = steppers[j]->step(states[j], seg.dt);
          (*monitors[j])(StepEvent{mesh, params[j], states[j], next, seg.dt, steppers[j]->last_Mv(),
                                   steppers[j]->last_Mu()});
          const double w = (mean_value(mesh, next.v) - mean_value(mesh, states[j].v)) / seg.dt;
          dtv[j] += static_cast<long double>(seg.dt) * w * w;
          states[j] = std::move(next);
        }
        for (std::size_t j = 1; j < all.size(); ++j) {
          const double e = lebesgue_norm(mesh, states[j].v - states[0].v, 2.0);
          qt[j] += static_cast<long double>(seg.dt) * e * e;
          sup[j] = std::max(sup[j], e);
          if (record) res.series.push_back({prep, all[j], states[j].time, e});
        }
      }
    }
    for (std::size_t j = 0; j < all.size(); ++j) {
      ApSummary s;
      s.preparation = prep;
      s.epsilon = all[j];
      s.l2_qt = std::sqrt(static_cast<double>(qt[j]));
      s.sup_l2 = sup[j];
      s.mean_dtv = std::sqrt(static_cast<double>(dtv[j]));
      const std::vector<double> w = ap_mean_closed_form(params[j], mu0, mv0, dts);
      long double cf = 0.0L;
      for (std::size_t k = 0; k < w.size(); ++k) cf += static_cast<long double>(dts[k]) * w[k] * w[k];
      s.closed_form = std::sqrt(static_cast<double>(cf));
      res.summary.push_back(s);
      res.monitors.push_back(monitors[j]->report());
    }
    spdlog::info("testcase 2: {} data done", prep);
  }
  return res;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("log-log fit needs positive data");
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y,
                   double transient_end, double floor) {
  if (t.size() != y.size()) throw std::invalid_argument("size mismatch");
  DecayFit fit;
  std::size_t a = 0;
  while (a < t.size() && t[a] < transient_end) ++a;
  if (a + 2 > t.size()) return fit;
  const double y0 = y[a];
  std::size_t b = a;
  while (b + 1 < t.size() && y[b + 1] > floor * y0) ++b;
  if (b < a + 2) return fit;
  fit.start = t[a];
  fit.end = t[b];
  fit.decreasing = true;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = a; i <= b; ++i) {
    if (i > a && !(y[i] < y[i - 1])) fit.decreasing = false;
    const double ly = std::log(y[i]);
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
  }
  const double n = static_cast<double>(b - a + 1);
  fit.rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

void Testcase3Result::write_norms_csv(std::ostream& out, const Testcase3Case& c) {
  out << "t,max_u,max_v,relative_entropy\n";
  for (const NormRecord& r : c.norms)
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.max_u, r.max_v, r.relative_entropy);
}

Testcase3Result run_testcase_3(const RunConfig& config) {
  if (config.mesh.kind == MeshSpec::Kind::interval)
    throw std::invalid_argument("testcase 3 runs on a 2D mesh");
  BuiltMesh bm = build_mesh(config.mesh);
  const Mesh& mesh = bm.mesh;
  Testcase3Result res;
  res.zeta = bm.zeta;
  res.cells = mesh.num_cells();
  res.lambda1 = smallest_nonzero_eigenvalue(mesh);
  res.mu_c = config.beta + config.delta * res.lambda1;
  std::vector<std::string> cases = config.study.cases;
  const bool single = cases.empty();
  if (single) cases = {""};
  for (const std::string& label : cases) {
    RunConfig c = config;
    if (!single) {
      c.initial.mu_factor = case_factor(label);
      c.initial.mu = 0.0;
    }
    const SchemeParams params = c.params();
    const State init = initial_state(c, mesh, res.mu_c);
    Testcase3Case tc;
    tc.label = single ? "run" : label;
    tc.profile = c.initial.kind;
    tc.mu = mesh_mu(c.initial, res.mu_c);
    InvariantMonitor mon(mesh, params, init);
    const long stride = c.output.stride;
    auto norms = [&](const State& s) {
      tc.norms.push_back({s.time, max_norm(s.u), max_norm(s.v),
                          relative_entropy(mesh, params, s.u, s.v, tc.mu)});
    };
    norms(init);
    Observer rec = [&](const StepEvent& ev) {
      if (ev.current.step % stride == 0) norms(ev.current);
    };
    std::vector<Observer> obs{mon.observer(), rec};
    std::unique_ptr<SnapshotRecorder> snaps;
    if (!c.output.dir.empty() && !c.output.snapshots.empty()) {
      snaps = std::make_unique<SnapshotRecorder>(
          c.output.dir / fmt::format("snapshots_{}_{}", tc.profile, tc.label), c.output.snapshots,
          c.output.vtk);
      snaps->start(mesh, init);
      obs.push_back(snaps->observer());
    }
    RunOptions opt;
    opt.stride = stride;
    opt.dual_norm = false;
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r = run(init, mesh, params, c.t_final, obs, opt);
    if (tc.norms.back().t < r.final_state.time) norms(r.final_state);
    spdlog::info("testcase 3: case {} (mu = {:.6g}) in {:.1f} s", tc.label, tc.mu,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    tc.monitor = mon.report();
    std::vector<double> t, y;
    for (const NormRecord& n : tc.norms) {
      t.push_back(n.t);
      y.push_back(n.relative_entropy);
    }
    // the chemoattractant relaxes at rate at least beta / epsilon; ten of those end the transient
    const double transient = 10.0 * c.epsilon / c.beta;
    const DecayFit fit = fit_decay(t, y, transient, 1e-12);
    tc.fit_rate = fit.rate;
    tc.fit_start = fit.start;
    tc.fit_end = fit.end;
    tc.decreasing_after_transient = fit.decreasing;
    res.cases.push_back(std::move(tc));
  }
  return res;
}

Testcase4Result run_testcase_4(const RunConfig& config) {
  if (config.mesh.kind == MeshSpec::Kind::interval)
    throw std::invalid_argument("testcase 4 runs on a 2D mesh");
  BuiltMesh bm = build_mesh(config.mesh);
  const Mesh& mesh = bm.mesh;
  const SchemeParams params = config.params();
  const State init = initial_state(config, mesh);
  InvariantMonitor mon(mesh, params, init);
  std::vector<Observer> obs{mon.observer()};
  std::unique_ptr<SnapshotRecorder> snaps;
  if (!config.output.dir.empty() && !config.output.snapshots.empty()) {
    snaps = std::make_unique<SnapshotRecorder>(config.output.dir / "snapshots",
                                               config.output.snapshots, config.output.vtk);
    snaps->start(mesh, init);
    obs.push_back(snaps->observer());
  }
  RunOptions opt;
  opt.stride = config.output.stride;
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r = run(init, mesh, params, config.t_final, obs, opt);
  spdlog::info("testcase 4: {} cells, {} steps in {:.1f} s", mesh.num_cells(), r.final_state.step,
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  Testcase4Result res;
  res.zeta = bm.zeta;
  res.cells = mesh.num_cells();
  res.monitor = mon.report();
  std::ostringstream csv;
  r.series.write_csv(csv);
  res.observables_csv = csv.str();
  res.series = std::move(r.series);
  res.final_state = std::move(r.final_state);
  return res;
}

PlainRunResult run_plain(const RunConfig& config) {
  BuiltMesh bm = build_mesh(config.mesh);
  const Mesh& mesh = bm.mesh;
  double mu_c = 0.0;
  if (config.initial.mu_factor > 0.0) mu_c = stability_threshold(mesh, config.params());
  const SchemeParams params = config.params();
  const State init = initial_state(config, mesh, mu_c);
  InvariantMonitor mon(mesh, params, init);
  std::vector<Observer> obs{mon.observer()};
  std::unique_ptr<SnapshotRecorder> snaps;
  if (!config.output.dir.empty() && !config.output.snapshots.empty()) {
    snaps = std::make_unique<SnapshotRecorder>(config.output.dir / "snapshots",
                                               config.output.snapshots, config.output.vtk);
    snaps->start(mesh, init);
    obs.push_back(snaps->observer());
  }
  RunOptions opt;
  opt.stride = config.output.stride;
  PlainRunResult res{run(init, mesh, params, config.t_final, obs, opt), {}};
  res.monitor = mon.report();
  return res;
}

void write_manifest(const std::filesystem::path& path, const RunConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  nlohmann::ordered_json j;
  j["program"] = "chemofv";
  j["full_scale"] = config.full_scale;
  nlohmann::ordered_json p;
  for (const auto& [k, v] : config.resolved()) p[k] = v;
  j["parameters"] = p;
  j["motility"] = config.motility.describe();
  j["total_steps"] = config.schedule().total_steps();
  nlohmann::ordered_json e;
  for (const auto& [k, v] : extra) e[k] = v;
  j["results"] = e;
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["generated"] = stamp;
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

namespace {

std::string g17(double x) { return fmt::format("{:.17g}", x); }

void write_monitor(std::vector<std::pair<std::string, std::string>>& extra, const std::string& prefix,
                   const InvariantMonitor::Report& r) {
  extra.emplace_back(prefix + "steps", std::to_string(r.steps));
  extra.emplace_back(prefix + "entropy_violations", std::to_string(r.entropy_violations));
  extra.emplace_back(prefix + "duality_violations", std::to_string(r.duality_violations));
  extra.emplace_back(prefix + "mass_u_error", g17(r.mass_u_error));
  extra.emplace_back(prefix + "min_u", g17(r.min_u));
  extra.emplace_back(prefix + "min_v", g17(r.min_v));
}

}  // namespace

void execute(const RunConfig& config) {
  const std::filesystem::path dir = config.output.dir.empty() ? "." : config.output.dir;
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> extra;
  switch (config.testcase) {
    case 1: {
      const Testcase1Result r = run_testcase_1(config);
      {
        auto f = open_out(dir / "convergence.csv");
        r.report.write_csv(f);
      }
      {
        auto f = open_out(dir / "observables.csv");
        r.reference_series.write_csv(f);
      }
      for (const auto& l : r.report.levels)
        extra.emplace_back(fmt::format("l2_error_{}", l.cells), g17(l.l2));
      write_monitor(extra, "reference_", r.monitors.back());
      break;
    }
    case 2: {
      const Testcase2Result r = run_testcase_2(config);
      {
        auto f = open_out(dir / "ap_summary.csv");
        r.write_summary_csv(f);
      }
      {
        auto f = open_out(dir / "ap_series.csv");
        r.write_series_csv(f);
      }
      std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_prep;
      for (const ApSummary& s : r.summary)
        if (s.epsilon > 0.0 && s.mean_dtv > 0.0) {
          by_prep[s.preparation].first.push_back(s.epsilon);
          by_prep[s.preparation].second.push_back(s.mean_dtv);
        }
      for (const auto& [prep, xy] : by_prep)
        if (xy.first.size() >= 2)
          extra.emplace_back("mean_dtv_slope_" + prep, g17(loglog_slope(xy.first, xy.second)));
      break;
    }
    case 3: {
      RunConfig c = config;
      c.output.dir = dir;
      const Testcase3Result r = run_testcase_3(c);
      extra.emplace_back("cells", std::to_string(r.cells));
      extra.emplace_back("zeta", g17(r.zeta));
      extra.emplace_back("lambda1", g17(r.lambda1));
      extra.emplace_back("mu_c", g17(r.mu_c));
      auto summary = open_out(dir / "cases.csv");
      summary << "case,profile,mu,fit_rate,fit_start,fit_end,max_u_final\n";
      for (const Testcase3Case& tc : r.cases) {
        auto f = open_out(dir / fmt::format("norms_{}_{}.csv", tc.profile, tc.label));
        Testcase3Result::write_norms_csv(f, tc);
        fmt::print(summary, "{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", tc.label, tc.profile,
                   tc.mu, tc.fit_rate, tc.fit_start, tc.fit_end, tc.norms.back().max_u);
        write_monitor(extra, fmt::format("case_{}_", tc.label), tc.monitor);
      }
      break;
    }
    case 4: {
      RunConfig c = config;
      c.output.dir = dir;
      const Testcase4Result r = run_testcase_4(c);
      auto f = open_out(dir / "observables.csv");
      f << r.observables_csv;
      extra.emplace_back("cells", std::to_string(r.cells));
      extra.emplace_back("zeta", g17(r.zeta));
      write_monitor(extra, "", r.monitor);
      break;
    }
    default: {
      RunConfig c = config;
      c.output.dir = dir;
      const PlainRunResult r = run_plain(c);
      auto f = open_out(dir / "observables.csv");
      r.run.series.write_csv(f);
      write_monitor(extra, "", r.monitor);
      break;
    }
  }
  write_manifest(dir / "manifest.json", config, extra);
}

}  // namespace chemofv
