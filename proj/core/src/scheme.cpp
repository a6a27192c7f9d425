#include "chemofv/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace chemofv {

Motility Motility::algebraic(double c, double k) {
  if (!(c > 0.0)) throw std::invalid_argument("algebraic motility needs c > 0");
  if (!(k >= 1.0)) throw std::invalid_argument("algebraic motility needs k >= 1");
  Motility m;
  m.kind = Kind::algebraic;
  m.c = c;
  m.k = k;
  return m;
}

double Motility::operator()(double s) const {
  if (kind == Kind::exponential) return std::exp(-s);
  const double p = k == 2.0 ? s * s : std::pow(std::abs(s), k);
  return 1.0 / (c + p);
}

std::string Motility::describe() const {
  if (kind == Kind::exponential) return "exp(-v)";
  return fmt::format("1/({:g}+v^{:g})", c, k);
}

TimeSchedule::TimeSchedule(std::vector<TimeSegment> segments) : segments_(std::move(segments)) {
  for (const TimeSegment& s : segments_) {
    if (!(s.dt > 0.0) || !std::isfinite(s.dt)) throw std::invalid_argument("time steps must be positive");
    if (s.steps < 0) throw std::invalid_argument("negative step count");
  }
}

namespace {

long steps_for(double dt, double span) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time steps must be positive");
  if (!(span >= 0.0)) throw std::invalid_argument("negative time span");
  const long n = std::lround(span / dt);
  if (std::abs(n * dt - span) > 1e-9 * std::max(span, dt))
    throw std::invalid_argument(
        fmt::format("time span {:g} is not a multiple of the step {:g}", span, dt));
  return n;
}

}  // namespace

TimeSchedule TimeSchedule::constant(double dt, double t_final) {
  return TimeSchedule({{dt, steps_for(dt, t_final)}});
}

TimeSchedule TimeSchedule::two_phase(double dt1, double t_switch, double dt2, double t_final) {
  if (!(t_switch <= t_final)) throw std::invalid_argument("switch time after final time");
  return TimeSchedule({{dt1, steps_for(dt1, t_switch)}, {dt2, steps_for(dt2, t_final - t_switch)}});
}

long TimeSchedule::total_steps() const {
  long n = 0;
  for (const TimeSegment& s : segments_) n += s.steps;
  return n;
}

double TimeSchedule::total_time() const {
  long double t = 0.0L;
  for (const TimeSegment& s : segments_) t += static_cast<long double>(s.dt) * s.steps;
  return static_cast<double>(t);
}

void SchemeParams::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be > 0");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be >= 0");
  if (!(tol_rel > 0.0)) throw std::invalid_argument("solver tolerance must be > 0");
  if (delta == 0.0)
    spdlog::warn("delta = 0: the chemoattractant does not diffuse; this regime is very degenerate "
                 "and no convergence or stability is claimed");
}

SparseSystem assemble_Mv(const Mesh& mesh, const SchemeParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.num_cells());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(n + 2 * mesh.num_interior_edges());
  for (int k = 0; k < n; ++k) {
    double d = mesh.cell(k).volume * (params.epsilon + dt * params.beta);
    for (int e : mesh.interior_edges(k)) d += params.delta * dt * mesh.edge(e).transmissibility;
    t.emplace_back(k, k, d);
  }
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) continue;
    const double off = -params.delta * dt * e.transmissibility;
    t.emplace_back(e.k, e.l, off);
    t.emplace_back(e.l, e.k, off);
  }
  SparseSystem::Matrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return SparseSystem(std::move(a));
}

SparseSystem assemble_Mu(const Mesh& mesh, const SchemeParams& params, double dt,
                         const DiscreteField& v) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  v.require(mesh);
  if (!v.finite()) throw std::invalid_argument("non-finite chemoattractant");
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.num_cells());
  std::vector<double> g(n);
  for (Eigen::Index k = 0; k < n; ++k) g[k] = params.motility(v[k]);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(n + 2 * mesh.num_interior_edges());
  for (int k = 0; k < n; ++k) {
    double d = mesh.cell(k).volume;
    for (int e : mesh.interior_edges(k)) d += dt * mesh.edge(e).transmissibility * g[k];
    t.emplace_back(k, k, d);
  }
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) continue;
    t.emplace_back(e.k, e.l, -dt * e.transmissibility * g[e.l]);
    t.emplace_back(e.l, e.k, -dt * e.transmissibility * g[e.k]);
  }
  SparseSystem::Matrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return SparseSystem(std::move(a));
}

Stepper::Stepper(const Mesh& mesh, SchemeParams params) : mesh_(mesh), params_(std::move(params)) {
  params_.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.num_cells());
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index k = 0; k < n; ++k) t.emplace_back(k, k, 1.0);
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) continue;
    t.emplace_back(e.k, e.l, 1.0);
    t.emplace_back(e.l, e.k, 1.0);
  }
  pattern_.resize(n, n);
  pattern_.setFromTriplets(t.begin(), t.end());
  pattern_.makeCompressed();
  auto position = [&](Eigen::Index row, Eigen::Index col) {
    const int* inner = pattern_.innerIndexPtr();
    const int begin = pattern_.outerIndexPtr()[col], end = pattern_.outerIndexPtr()[col + 1];
    const int* it = std::lower_bound(inner + begin, inner + end, static_cast<int>(row));
    return static_cast<int>(it - inner);
  };
  diag_pos_.resize(n);
  tau_sum_.assign(n, 0.0);
  for (Eigen::Index k = 0; k < n; ++k) diag_pos_[k] = position(k, k);
  kl_pos_.assign(mesh.num_edges(), -1);
  lk_pos_.assign(mesh.num_edges(), -1);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(e);
    if (ed.boundary()) continue;
    kl_pos_[e] = position(ed.k, ed.l);
    lk_pos_[e] = position(ed.l, ed.k);
  }
  for (int k = 0; k < n; ++k)
    for (int e : mesh.interior_edges(k)) tau_sum_[k] += mesh.edge(e).transmissibility;
}

void Stepper::refresh_Mv(double dt) {
  if (dt == mv_dt_) return;
  SparseSystem::Matrix a = pattern_;
  double* val = a.valuePtr();
  const double eb = params_.epsilon + dt * params_.beta;
  for (std::size_t k = 0; k < mesh_.num_cells(); ++k) {
    double d = mesh_.cell(k).volume * eb;
    for (int e : mesh_.interior_edges(static_cast<int>(k)))
      d += params_.delta * dt * mesh_.edge(e).transmissibility;
    val[diag_pos_[k]] = d;
  }
  for (std::size_t e = 0; e < mesh_.num_edges(); ++e) {
    if (kl_pos_[e] < 0) continue;
    const double off = -params_.delta * dt * mesh_.edge(e).transmissibility;
    val[kl_pos_[e]] = off;
    val[lk_pos_[e]] = off;
  }
  mv_ = std::make_unique<SparseSystem>(std::move(a));
  mv_solver_.factorize(*mv_);
  mv_dt_ = dt;
}

void Stepper::refresh_Mu(double dt, const DiscreteField& v) {
  SparseSystem::Matrix a = pattern_;
  double* val = a.valuePtr();
  const std::size_t n = mesh_.num_cells();
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = params_.motility(v[k]);
  for (std::size_t k = 0; k < n; ++k) {
    double d = mesh_.cell(k).volume;
    for (int e : mesh_.interior_edges(static_cast<int>(k)))
      d += dt * mesh_.edge(e).transmissibility * g[k];
    val[diag_pos_[k]] = d;
  }
  for (std::size_t e = 0; e < mesh_.num_edges(); ++e) {
    if (kl_pos_[e] < 0) continue;
    const Edge& ed = mesh_.edge(e);
    val[kl_pos_[e]] = -dt * ed.transmissibility * g[ed.l];
    val[lk_pos_[e]] = -dt * ed.transmissibility * g[ed.k];
  }
  mu_ = std::make_unique<SparseSystem>(std::move(a));
  mu_solver_.factorize(*mu_);
}

State Stepper::step(const State& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  state.u.require(mesh_);
  state.v.require(mesh_);
  const Eigen::Index n = static_cast<Eigen::Index>(mesh_.num_cells());

  refresh_Mv(dt);
  Vector bv(n);
  for (Eigen::Index k = 0; k < n; ++k)
    bv[k] = mesh_.cell(k).volume * (params_.epsilon * state.v[k] + dt * state.u[k]);
  const Vector v = mv_solver_.solve(bv, params_.tol_rel);

  State next;
  next.v = state.v;
  for (Eigen::Index k = 0; k < n; ++k) next.v[k] = v[k];

  refresh_Mu(dt, next.v);
  Vector bu(n);
  for (Eigen::Index k = 0; k < n; ++k) bu[k] = mesh_.cell(k).volume * state.u[k];
  const Vector u = mu_solver_.solve(bu, params_.tol_rel);
  next.u = state.u;
  for (Eigen::Index k = 0; k < n; ++k) next.u[k] = u[k];

  if (!next.u.finite() || !next.v.finite())
    throw std::runtime_error(fmt::format("non-finite values at step {}", state.step + 1));
  next.step = state.step + 1;
  next.time = state.time + dt;
  return next;
}

State step(const State& state, const Mesh& mesh, const SchemeParams& params, double dt) {
  Stepper s(mesh, params);
  return s.step(state, dt);
}

DiscreteField stationary_v_init(const Mesh& mesh, const SchemeParams& params,
                                const DiscreteField& u0) {
  u0.require(mesh);
  if (!u0.finite()) throw std::invalid_argument("non-finite initial density");
  SchemeParams p = params;
  p.epsilon = 0.0;
  const SparseSystem a = assemble_Mv(mesh, p, 1.0);
  Vector b(static_cast<Eigen::Index>(mesh.num_cells()));
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) b[k] = mesh.cell(k).volume * u0[k];
  const Vector v = solve(a, b, params.tol_rel);
  DiscreteField out(mesh);
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) out[k] = v[k];
  return out;
}

}  // namespace chemofv
