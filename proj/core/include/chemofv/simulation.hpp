#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chemofv/diagnostics.hpp"
#include "chemofv/scheme.hpp"

namespace chemofv {

struct Observation {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double mean_u = 0.0;
  double mean_v = 0.0;
  double entropy = 0.0;
  double dissipation = 0.0;  ///< NaN on the initial record
  double boltzmann = 0.0;
  double quadratic = 0.0;
  double cross = 0.0;
  double gradient = 0.0;
  double max_u = 0.0;
  double max_v = 0.0;
  double min_u = 0.0;
  double min_v = 0.0;
  double dual_norm = 0.0;        ///< N(u - <u0>)
  double u_sqrt_gamma_sq = 0.0;  ///< ||u sqrt(gamma(v))||^2
  double mean_w = 0.0;           ///< <(v^n - v^{n-1}) / dt>, NaN on the initial record
  double norm_w = 0.0;
};

class ObservableSeries {
 public:
  static const std::vector<std::string>& columns();

  /// Rejects records whose time does not increase.
  void add(const Observation& o);
  const std::vector<Observation>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }

  void write_csv(std::ostream& out) const;
  static ObservableSeries read_csv(std::istream& in);

 private:
  std::vector<Observation> records_;
};

struct StepEvent {
  const Mesh& mesh;
  const SchemeParams& params;
  const State& previous;
  const State& current;
  double dt;
  const SparseSystem& mv;
  const SparseSystem& mu;
};

using Observer = std::function<void(const StepEvent&)>;

struct RunOptions {
  long stride = 1;         ///< record every stride-th step, plus the last one
  bool dual_norm = true;   ///< N(u - <u0>) costs one Poisson solve per record
};

struct RunResult {
  ObservableSeries series;
  State final_state;
};

Observation observe(const Mesh& mesh, const SchemeParams& params, const State& state,
                    const State* previous, double dt, double mean_u0, const DualNorm* dual);

/// Steps through the schedule until t_final, calling observers after every step.
RunResult run(const State& initial, const Mesh& mesh, const SchemeParams& params, double t_final,
              const std::vector<Observer>& observers = {}, const RunOptions& options = {});

/// Per-step checks of the discrete structure: entropy, masses, positivity, matrix sums,
/// duality inequality and mean recursion of the chemoattractant.
class InvariantMonitor {
 public:
  struct Report {
    long steps = 0;
    long entropy_violations = 0;       ///< H^n > H^{n-1} + slack
    long dissipation_violations = 0;   ///< H^n + dt D^n > H^{n-1} + slack
    double worst_entropy_increase = -INFINITY;  ///< max (H^n - H^{n-1}) / (1 + |H^{n-1}|)
    double mass_u_error = 0.0;         ///< max |<u^n> - <u0>| / <u0>
    double mean_v_error = 0.0;         ///< max |<v^n> - closed form|
    double min_u = INFINITY;           ///< over the computed steps, initial data excluded
    double min_v = INFINITY;
    double mv_row_sum_error = 0.0;     ///< relative to the row scale
    double mu_column_sum_error = 0.0;  ///< relative to the column scale
    long duality_violations = 0;
    double worst_duality_excess = -INFINITY;
    double ap_error = 0.0;      ///< max |<w^n> - closed form| / |<w^0>|, eps > 0
    double ap_zero_max = 0.0;   ///< max |<w^n>| for n >= 1 when eps = 0
    bool entropy_checked = false;

    bool structure_ok() const;
  };

  InvariantMonitor(const Mesh& mesh, const SchemeParams& params, const State& initial);
  void operator()(const StepEvent& ev);
  Observer observer();
  const Report& report() const { return report_; }

 private:
  const Mesh& mesh_;
  SchemeParams params_;
  double mean_u0_, mean_v0_;
  double h_prev_;
  double n_prev_;
  double product_ = 1.0;
  double w0_scale_;
  std::vector<double> dts_;
  std::optional<DualNorm> dual_;
  bool exponential_;
  Report report_;
};

inline constexpr double kEntropySlack = 1e-12;
inline constexpr double kDualitySlack = 1e-10;

}  // namespace chemofv
