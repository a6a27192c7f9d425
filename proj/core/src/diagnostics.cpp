#include "chemofv/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace chemofv {

double boltzmann_h(double x) {
  if (x < 0.0) throw std::domain_error("h is undefined for negative arguments");
  if (x == 0.0) return 1.0;
  return x * (std::log(x) - 1.0) + 1.0;
}

EntropyTerms entropy_terms(const Mesh& mesh, const SchemeParams& params, const DiscreteField& u,
                           const DiscreteField& v) {
  u.require(mesh);
  v.require(mesh);
  long double b = 0.0L, q = 0.0L, c = 0.0L, g = 0.0L;
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    if (u[k] < 0.0)
      throw std::domain_error(fmt::format("negative density {:g} in cell {}", u[k], k));
    const long double m = mesh.cell(k).volume;
    b += m * boltzmann_h(u[k]);
    q += m * v[k] * v[k];
    c += m * u[k] * v[k];
  }
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) continue;
    const double d = v[e.l] - v[e.k];
    g += e.transmissibility * d * d;
  }
  EntropyTerms t;
  t.boltzmann = static_cast<double>(b);
  t.quadratic = static_cast<double>(0.5L * params.beta * q);
  t.cross = static_cast<double>(-c);
  t.gradient = static_cast<double>(0.5L * params.delta * g);
  return t;
}

double entropy(const Mesh& mesh, const SchemeParams& params, const DiscreteField& u,
               const DiscreteField& v) {
  return entropy_terms(mesh, params, u, v).total();
}

double dissipation(const Mesh& mesh, const SchemeParams& params, const DiscreteField& u,
                   const DiscreteField& v, const DiscreteField& v_prev, double dt) {
  u.require(mesh);
  v.require(mesh);
  v_prev.require(mesh);
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  std::vector<double> s(mesh.num_cells());
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    if (u[k] < 0.0)
      throw std::domain_error(fmt::format("negative density {:g} in cell {}", u[k], k));
    s[k] = std::sqrt(u[k] * params.motility(v[k]));
  }
  long double flux = 0.0L, time = 0.0L;
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) continue;
    const double d = s[e.l] - s[e.k];
    flux += e.transmissibility * d * d;
  }
  if (params.epsilon > 0.0)
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
      const double r = (v[k] - v_prev[k]) / dt;
      time += mesh.cell(k).volume * r * r;
    }
  return static_cast<double>(4.0L * flux + params.epsilon * time);
}

double relative_entropy(const Mesh& mesh, const SchemeParams& params, const DiscreteField& u,
                        const DiscreteField& v, double mu) {
  u.require(mesh);
  v.require(mesh);
  if (!(mu > 0.0)) throw std::domain_error("mu must be positive");
  const double vs = mu / params.beta;
  long double s = 0.0L, g = 0.0L;
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    if (!(u[k] > 0.0))
      throw std::domain_error(fmt::format("nonpositive density {:g} in cell {}", u[k], k));
    const double du = u[k] - mu, dv = v[k] - vs;
    s += mesh.cell(k).volume *
         (du * std::log1p(du / mu) + 0.5 * params.beta * dv * dv - du * dv);
  }
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) continue;
    const double d = v[e.l] - v[e.k];
    g += e.transmissibility * d * d;
  }
  return static_cast<double>(s + 0.5L * params.delta * g);
}

double u_sqrt_gamma_sq(const Mesh& mesh, const SchemeParams& params, const DiscreteField& u,
                       const DiscreteField& v) {
  u.require(mesh);
  v.require(mesh);
  long double s = 0.0L;
  for (std::size_t k = 0; k < mesh.num_cells(); ++k)
    s += mesh.cell(k).volume * u[k] * u[k] * params.motility(v[k]);
  return static_cast<double>(s);
}

DualNorm::DualNorm(const Mesh& mesh) : mesh_(mesh), poisson_(mesh) {}

DiscreteField DualNorm::potential(const DiscreteField& w) const { return poisson_.solve(w); }

double DualNorm::operator()(const DiscreteField& w, double magnitude) const {
  const DiscreteField z = poisson_.solve(w, magnitude);
  return discrete_seminorm(mesh_, z, 2.0);
}

double dual_norm(const Mesh& mesh, const DiscreteField& w) { return DualNorm(mesh)(w); }

DualityStep duality_step(double n_prev, double n_cur, double dt, double usg, double measure,
                         double mean_u0) {
  DualityStep s;
  s.lhs = n_cur * n_cur + 2.0 * dt * usg;
  s.rhs = n_prev * n_prev + 2.0 * dt * measure * mean_u0 * mean_u0;
  return s;
}

std::vector<ApRecord> ap_observables(const Mesh& mesh, const std::vector<DiscreteField>& v,
                                     const std::vector<double>& dt) {
  if (v.size() < 2) throw std::invalid_argument("need at least two chemoattractant snapshots");
  if (dt.size() + 1 != v.size()) throw std::invalid_argument("need one step size per difference");
  std::vector<ApRecord> out;
  out.reserve(dt.size());
  for (std::size_t n = 0; n + 1 < v.size(); ++n) {
    DiscreteField w = v[n + 1] - v[n];
    w *= 1.0 / dt[n];
    ApRecord r;
    r.mean = mean_value(mesh, w);
    r.l2 = lebesgue_norm(mesh, w, 2.0);
    w += -r.mean;
    r.fluctuation = lebesgue_norm(mesh, w, 2.0);
    out.push_back(r);
  }
  return out;
}

std::vector<double> ap_mean_closed_form(const SchemeParams& params, double mean_u0,
                                        double mean_v0, const std::vector<double>& dt) {
  std::vector<double> out;
  out.reserve(dt.size());
  const double a = mean_u0 - params.beta * mean_v0;
  double product = 1.0;
  for (std::size_t n = 0; n < dt.size(); ++n) {
    out.push_back(a * product / (params.epsilon + params.beta * dt[n]));
    product *= params.epsilon / (params.epsilon + params.beta * dt[n]);
  }
  return out;
}

double ap_mean_bound(double measure, const SchemeParams& params, double mean_u0, double mean_v0,
                     double dt, long n_steps) {
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("the mean bound needs epsilon > 0");
  const double xi = params.beta * dt / params.epsilon;
  const double a = (mean_u0 - params.beta * mean_v0) / std::sqrt(params.epsilon);
  return measure / params.beta * a * a * -std::expm1(-2.0 * n_steps * std::log1p(xi));
}

double mean_v_closed_form(const SchemeParams& params, double mean_u0, double mean_v0,
                          const std::vector<double>& dts) {
  double product = 1.0;
  for (double dt : dts) product *= params.epsilon / (params.epsilon + params.beta * dt);
  return mean_u0 / params.beta + product * (mean_v0 - mean_u0 / params.beta);
}

double stability_threshold(const Mesh& mesh, const SchemeParams& params, double tol) {
  if (params.delta == 0.0) return params.beta;
  return params.beta + params.delta * smallest_nonzero_eigenvalue(mesh, tol);
}

CounterexampleReport projection_counterexample(int m, int r) {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  if (r < m) throw std::invalid_argument("r must be at least m");
  const Mesh mesh = build_uniform_1d(-1.0, 1.0, 2 * m);
  DiscreteField w(mesh);
  w[m - 1] = -m;
  w[m] = m;
  CounterexampleReport rep;
  rep.m = m;
  rep.r = r;
  rep.dual_norm = dual_norm(mesh, w);
  rep.lower_bound = 1.0 / std::sqrt(static_cast<double>(m));
  rep.upper_bound = std::sqrt(2.0) / std::sqrt(static_cast<double>(r));
  rep.ratio = rep.dual_norm / rep.upper_bound;
  rep.bound_holds = rep.dual_norm >= rep.lower_bound * (1.0 - 1e-12);
  return rep;
}

}  // namespace chemofv
