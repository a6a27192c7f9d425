#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chemofv/linsolve.hpp"
#include "chemofv/mesh.hpp"

namespace chemofv {

struct Motility {
  enum class Kind { exponential, algebraic };
  Kind kind = Kind::exponential;
  double c = 1.0;
  double k = 2.0;

  static Motility exponential() { return {}; }
  /// gamma(s) = 1 / (c + s^k)
  static Motility algebraic(double c, double k);

  double operator()(double s) const;
  std::string describe() const;
};

struct TimeSegment {
  double dt = 0.0;
  long steps = 0;
};

class TimeSchedule {
 public:
  TimeSchedule() = default;
  explicit TimeSchedule(std::vector<TimeSegment> segments);
  /// Constant step; T must be an integer multiple of dt up to round-off.
  static TimeSchedule constant(double dt, double t_final);
  /// dt1 until t_switch, then dt2 until t_final.
  static TimeSchedule two_phase(double dt1, double t_switch, double dt2, double t_final);

  const std::vector<TimeSegment>& segments() const { return segments_; }
  long total_steps() const;
  double total_time() const;
  bool constant_step() const { return segments_.size() == 1; }

 private:
  std::vector<TimeSegment> segments_;
};

struct SchemeParams {
  double epsilon = 1.0;
  double delta = 1.0;
  double beta = 1.0;
  Motility motility;
  TimeSchedule schedule;
  double tol_rel = 1e-10;

  /// Throws on invalid values; warns when delta = 0.
  void validate() const;
};

struct State {
  DiscreteField u;
  DiscreteField v;
  long step = 0;
  double time = 0.0;
};

SparseSystem assemble_Mv(const Mesh& mesh, const SchemeParams& params, double dt);
SparseSystem assemble_Mu(const Mesh& mesh, const SchemeParams& params, double dt,
                         const DiscreteField& v);

/// Time stepper holding the matrix patterns and factorizations of one simulation.
class Stepper {
 public:
  Stepper(const Mesh& mesh, SchemeParams params);

  /// v^n from u^{n-1}, then u^n with gamma(v^n).
  State step(const State& state, double dt);

  const SparseSystem& last_Mv() const { return *mv_; }
  const SparseSystem& last_Mu() const { return *mu_; }
  const SchemeParams& params() const { return params_; }
  const Mesh& mesh() const { return mesh_; }

 private:
  void refresh_Mv(double dt);
  void refresh_Mu(double dt, const DiscreteField& v);

  const Mesh& mesh_;
  SchemeParams params_;
  SparseSystem::Matrix pattern_;
  std::vector<int> diag_pos_, kl_pos_, lk_pos_;
  std::vector<double> tau_sum_;
  std::unique_ptr<SparseSystem> mv_, mu_;
  LinearSolver mv_solver_, mu_solver_;
  double mv_dt_ = -1.0;
};

State step(const State& state, const Mesh& mesh, const SchemeParams& params, double dt);

/// Solves -delta Lap v + beta v = u0 on the mesh.
DiscreteField stationary_v_init(const Mesh& mesh, const SchemeParams& params,
                                const DiscreteField& u0);

}  // namespace chemofv
