#include "chemofv/simulation.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace chemofv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double* field_of(Observation& o, std::size_t i) {
  double* f[] = {&o.t,         &o.dt,        &o.mean_u,    &o.mean_v,   &o.entropy,
                 &o.dissipation, &o.boltzmann, &o.quadratic, &o.cross,    &o.gradient,
                 &o.max_u,     &o.max_v,     &o.min_u,     &o.min_v,    &o.dual_norm,
                 &o.u_sqrt_gamma_sq, &o.mean_w, &o.norm_w};
  return f[i];
}

constexpr std::size_t kRealColumns = 18;

}  // namespace

const std::vector<std::string>& ObservableSeries::columns() {
  static const std::vector<std::string> c = {
      "step",     "t",         "dt",        "mean_u",   "mean_v",    "entropy",  "dissipation",
      "boltzmann", "quadratic", "cross",    "gradient", "max_u",     "max_v",    "min_u",
      "min_v",    "dual_norm", "u_sqrt_gamma_sq", "mean_w", "norm_w"};
  return c;
}

void ObservableSeries::add(const Observation& o) {
  if (!records_.empty() && !(o.t > records_.back().t))
    throw std::invalid_argument(fmt::format("observation time {:g} does not increase", o.t));
  records_.push_back(o);
}

void ObservableSeries::write_csv(std::ostream& out) const {
  const auto& c = columns();
  for (std::size_t i = 0; i < c.size(); ++i) fmt::print(out, "{}{}", i ? "," : "", c[i]);
  out << '\n';
  for (Observation o : records_) {
    fmt::print(out, "{}", o.step);
    for (std::size_t i = 0; i < kRealColumns; ++i) fmt::print(out, ",{:.17g}", *field_of(o, i));
    out << '\n';
  }
}

ObservableSeries ObservableSeries::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty observables file");
  std::string expected;
  for (std::size_t i = 0; i < columns().size(); ++i) expected += (i ? "," : "") + columns()[i];
  if (line != expected) throw std::runtime_error("unexpected observables header");
  ObservableSeries s;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      values.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str() || *end != '\0')
        throw std::runtime_error(fmt::format("observables row {}: cannot read '{}'", row, cell));
    }
    if (values.size() != kRealColumns + 1)
      throw std::runtime_error(fmt::format("observables row {} has {} cells, expected {}", row,
                                           values.size(), kRealColumns + 1));
    Observation o;
    o.step = static_cast<long>(values[0]);
    for (std::size_t i = 0; i < kRealColumns; ++i) *field_of(o, i) = values[i + 1];
    s.records_.push_back(o);
  }
  return s;
}

Observation observe(const Mesh& mesh, const SchemeParams& params, const State& state,
                    const State* previous, double dt, double mean_u0, const DualNorm* dual) {
  Observation o;
  o.step = state.step;
  o.t = state.time;
  o.dt = previous ? dt : 0.0;
  o.mean_u = mean_value(mesh, state.u);
  o.mean_v = mean_value(mesh, state.v);
  const EntropyTerms h = entropy_terms(mesh, params, state.u, state.v);
  o.boltzmann = h.boltzmann;
  o.quadratic = h.quadratic;
  o.cross = h.cross;
  o.gradient = h.gradient;
  o.entropy = h.total();
  o.max_u = max_norm(state.u);
  o.max_v = max_norm(state.v);
  o.min_u = min_value(state.u);
  o.min_v = min_value(state.v);
  o.u_sqrt_gamma_sq = u_sqrt_gamma_sq(mesh, params, state.u, state.v);
  if (dual) {
    DiscreteField w = state.u;
    w += -mean_u0;
    o.dual_norm = (*dual)(w, mean_u0);
  } else {
    o.dual_norm = kNaN;
  }
  if (previous) {
    o.dissipation = dissipation(mesh, params, state.u, state.v, previous->v, dt);
    DiscreteField w = state.v - previous->v;
    w *= 1.0 / dt;
    o.mean_w = mean_value(mesh, w);
    o.norm_w = lebesgue_norm(mesh, w, 2.0);
  } else {
    o.dissipation = kNaN;
    o.mean_w = kNaN;
    o.norm_w = kNaN;
  }
  return o;
}

RunResult run(const State& initial, const Mesh& mesh, const SchemeParams& params, double t_final,
              const std::vector<Observer>& observers, const RunOptions& options) {
  if (options.stride < 1) throw std::invalid_argument("stride must be at least 1");
  const double total = params.schedule.total_time();
  if (total < t_final * (1.0 - 1e-12))
    throw std::invalid_argument(
        fmt::format("schedule covers {:g} but the run needs {:g}", total, t_final));
  Stepper stepper(mesh, params);
  std::optional<DualNorm> dual;
  if (options.dual_norm) dual.emplace(mesh);
  const double mean_u0 = mean_value(mesh, initial.u);

  RunResult res;
  res.series.add(observe(mesh, params, initial, nullptr, 0.0, mean_u0, dual ? &*dual : nullptr));
  State state = initial;
  const double stop = t_final * (1.0 - 1e-12);
  bool done = state.time >= stop;
  for (const TimeSegment& seg : params.schedule.segments()) {
    for (long i = 0; i < seg.steps && !done; ++i) {
      State next = stepper.step(state, seg.dt);
      const StepEvent ev{mesh, params, state, next, seg.dt, stepper.last_Mv(), stepper.last_Mu()};
      for (const Observer& obs : observers) obs(ev);
      done = next.time >= stop;
      if (next.step % options.stride == 0 || done)
        res.series.add(observe(mesh, params, next, &state, seg.dt, mean_u0, dual ? &*dual : nullptr));
      state = std::move(next);
    }
  }
  res.final_state = std::move(state);
  return res;
}

bool InvariantMonitor::Report::structure_ok() const {
  return entropy_violations == 0 && dissipation_violations == 0 && duality_violations == 0 &&
         mass_u_error <= 1e-9 && mean_v_error <= 1e-9 && min_u > 0.0 && min_v > 0.0 &&
         mv_row_sum_error <= 1e-13 && mu_column_sum_error <= 1e-13;
}

InvariantMonitor::InvariantMonitor(const Mesh& mesh, const SchemeParams& params,
                                   const State& initial)
    : mesh_(mesh),
      params_(params),
      mean_u0_(mean_value(mesh, initial.u)),
      mean_v0_(mean_value(mesh, initial.v)),
      h_prev_(0.0),
      n_prev_(0.0),
      w0_scale_(0.0),
      exponential_(params.motility.kind == Motility::Kind::exponential) {
  if (exponential_) {
    h_prev_ = entropy(mesh, params, initial.u, initial.v);
    dual_.emplace(mesh);
    DiscreteField w = initial.u;
    w += -mean_u0_;
    n_prev_ = (*dual_)(w, mean_u0_);
    report_.entropy_checked = true;
  }
}

Observer InvariantMonitor::observer() {
  return [this](const StepEvent& ev) { (*this)(ev); };
}

void InvariantMonitor::operator()(const StepEvent& ev) {
  Report& r = report_;
  ++r.steps;
  const DiscreteField& u = ev.current.u;
  const DiscreteField& v = ev.current.v;
  r.min_u = std::min(r.min_u, min_value(u));
  r.min_v = std::min(r.min_v, min_value(v));

  const double mu = mean_value(mesh_, u);
  r.mass_u_error = std::max(r.mass_u_error, std::abs(mu - mean_u0_) / std::abs(mean_u0_));
  const double mv = mean_value(mesh_, v);
  const double pred_v_prev = mean_u0_ / params_.beta + product_ * (mean_v0_ - mean_u0_ / params_.beta);
  const double a = mean_u0_ - params_.beta * mean_v0_;
  const double pred_w = a * product_ / (params_.epsilon + params_.beta * ev.dt);
  product_ *= params_.epsilon / (params_.epsilon + params_.beta * ev.dt);
  const double pred_v = mean_u0_ / params_.beta + product_ * (mean_v0_ - mean_u0_ / params_.beta);
  r.mean_v_error = std::max(r.mean_v_error, std::abs(mv - pred_v));
  (void)pred_v_prev;

  DiscreteField dv = v - ev.previous.v;
  const double mean_w = mean_value(mesh_, dv) / ev.dt;
  if (params_.epsilon > 0.0) {
    w0_scale_ = std::max(w0_scale_, std::abs(pred_w));
    if (w0_scale_ > 0.0) r.ap_error = std::max(r.ap_error, std::abs(mean_w - pred_w) / w0_scale_);
  } else if (r.steps >= 2) {
    r.ap_zero_max = std::max(r.ap_zero_max, std::abs(mean_w));
  }

  // matrix sums against their closed forms, relative to the row or column scale
  const auto& mvm = ev.mv.matrix();
  const auto& mum = ev.mu.matrix();
  const Eigen::Index n = mvm.rows();
  Vector mv_abs = Vector::Zero(n), mv_sum = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (SparseSystem::Matrix::InnerIterator it(mvm, j); it; ++it) {
      mv_abs[it.row()] += std::abs(it.value());
      mv_sum[it.row()] += it.value();
    }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double expect = mesh_.cell(k).volume * (params_.epsilon + ev.dt * params_.beta);
    r.mv_row_sum_error = std::max(r.mv_row_sum_error, std::abs(mv_sum[k] - expect) / mv_abs[k]);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    long double s = 0.0L, abs = 0.0L;
    for (SparseSystem::Matrix::InnerIterator it(mum, j); it; ++it) {
      s += it.value();
      abs += std::abs(it.value());
    }
    const double err = std::abs(static_cast<double>(s) - mesh_.cell(j).volume) / static_cast<double>(abs);
    r.mu_column_sum_error = std::max(r.mu_column_sum_error, err);
  }

  if (!exponential_) return;
  const double h = entropy(mesh_, params_, u, v);
  const double d = dissipation(mesh_, params_, u, v, ev.previous.v, ev.dt);
  const double slack = kEntropySlack * (1.0 + std::abs(h_prev_));
  r.worst_entropy_increase =
      std::max(r.worst_entropy_increase, (h - h_prev_) / (1.0 + std::abs(h_prev_)));
  if (h > h_prev_ + slack) ++r.entropy_violations;
  if (h + ev.dt * d > h_prev_ + slack) ++r.dissipation_violations;
  h_prev_ = h;

  DiscreteField w = u;
  w += -mean_u0_;
  const double ncur = (*dual_)(w, mean_u0_);
  const DualityStep ds = duality_step(n_prev_, ncur, ev.dt, u_sqrt_gamma_sq(mesh_, params_, u, v),
                                      mesh_.measure(), mean_u0_);
  r.worst_duality_excess =
      std::max(r.worst_duality_excess, (ds.lhs - ds.rhs) / (1.0 + std::abs(ds.rhs)));
  if (!ds.ok(kDualitySlack)) ++r.duality_violations;
  n_prev_ = ncur;
}

}  // namespace chemofv
