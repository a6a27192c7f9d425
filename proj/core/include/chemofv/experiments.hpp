#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "chemofv/config.hpp"
#include "chemofv/mesh_io.hpp"
#include "chemofv/simulation.hpp"

namespace chemofv {

/// 64-bit Mersenne Twister with a fixed mapping to (0, 1), identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next() { return gen_(); }
  /// ((x >> 11) + 1/2) 2^-53, never 0 or 1.
  double uniform_open() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

/// Smallest admissibility ratio accepted for generated or imported 2D meshes.
inline constexpr double kMinZeta = 1e-3;

struct BuiltMesh {
  Mesh mesh;
  Triangulation triangulation;  ///< empty in 1D
  double zeta = 0.0;            ///< worst admissibility ratio
};
BuiltMesh build_mesh(const MeshSpec& spec);

/// Initial state for the config's profile on the given mesh. mu_c is beta + delta lambda_1,
/// needed only when the profile uses mu_factor.
State initial_state(const RunConfig& config, const Mesh& mesh, double mu_c = 0.0);

/// Cell averages of a fine uniform field on a grid coarser by an integer factor.
std::vector<double> restrict_average(const std::vector<double>& fine, int coarse_cells);

struct ConvergenceLevel {
  int cells = 0;
  double l2 = 0.0;
  double linf = 0.0;
  double order_l2 = NAN;  ///< undefined on the first level
  double order_linf = NAN;
};

struct ConvergenceReport {
  int reference_cells = 0;
  double dt = 0.0;
  double t_final = 0.0;
  std::vector<ConvergenceLevel> levels;

  void write_csv(std::ostream& out) const;
};

/// Errors of each level against the reference averaged onto it, on a uniform grid of [a, b].
ConvergenceReport convergence_report(const std::vector<std::vector<double>>& solutions,
                                     const std::vector<double>& reference, double length);

struct Testcase1Result {
  ConvergenceReport report;
  ObservableSeries reference_series;
  std::vector<InvariantMonitor::Report> monitors;  ///< one per level, reference last
};
Testcase1Result run_testcase_1(const RunConfig& config);

struct ApSummary {
  std::string preparation;
  double epsilon = 0.0;
  double l2_qt = 0.0;       ///< ||v_eps - v_0|| in L2(Q_T)
  double sup_l2 = 0.0;      ///< max over steps of ||v_eps - v_0||
  double mean_dtv = 0.0;    ///< ||<d_t v>|| in L2(0, T)
  double closed_form = 0.0; ///< the same norm from the mean recursion
};
struct ApSeriesPoint {
  std::string preparation;
  double epsilon = 0.0;
  double t = 0.0;
  double error = 0.0;
};
struct Testcase2Result {
  std::vector<ApSummary> summary;
  std::vector<ApSeriesPoint> series;  ///< ||v_eps(t) - v_0(t)|| at the output stride
  std::vector<InvariantMonitor::Report> monitors;

  void write_summary_csv(std::ostream& out) const;
  void write_series_csv(std::ostream& out) const;
};
Testcase2Result run_testcase_2(const RunConfig& config);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct NormRecord {
  double t = 0.0;
  double max_u = 0.0;
  double max_v = 0.0;
  double relative_entropy = 0.0;
};
struct Testcase3Case {
  std::string label;  ///< a, b or c
  std::string profile;
  double mu = 0.0;
  std::vector<NormRecord> norms;
  double fit_rate = NAN;  ///< exponential rate of the relative entropy over the fit window
  double fit_start = NAN, fit_end = NAN;
  bool decreasing_after_transient = false;
  InvariantMonitor::Report monitor;
};
struct Testcase3Result {
  double lambda1 = 0.0;  ///< FV eigenvalue of the mesh
  double mu_c = 0.0;
  double zeta = 0.0;
  std::size_t cells = 0;
  std::vector<Testcase3Case> cases;

  static void write_norms_csv(std::ostream& out, const Testcase3Case& c);
};
/// Runs every case of the study (or the configured mu_factor alone when no cases are listed).
Testcase3Result run_testcase_3(const RunConfig& config);

/// Exponential fit of a positive series over the window where it decays from its value at the
/// end of the initial transient down to `floor` times that value.
struct DecayFit {
  double rate = NAN;
  double start = NAN;
  double end = NAN;
  bool decreasing = false;
};
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y,
                   double transient_end, double floor = 1e-16);

struct Testcase4Result {
  ObservableSeries series;
  InvariantMonitor::Report monitor;
  State final_state;
  double zeta = 0.0;
  std::size_t cells = 0;
  std::string observables_csv;
};
Testcase4Result run_testcase_4(const RunConfig& config);

/// Single run of any config: observables, snapshots and invariant checks.
struct PlainRunResult {
  RunResult run;
  InvariantMonitor::Report monitor;
};
PlainRunResult run_plain(const RunConfig& config);

/// Writes the run manifest with every resolved parameter and the given extra entries.
void write_manifest(const std::filesystem::path& path, const RunConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& extra = {});

/// Runs the config's testcase (or a plain run) and writes all outputs into config.output.dir.
void execute(const RunConfig& config);

}  // namespace chemofv
