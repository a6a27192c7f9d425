#include <cmath>

#include <benchmark/benchmark.h>

#include "chemofv/diagnostics.hpp"
#include "chemofv/generators.hpp"
#include "chemofv/scheme.hpp"

using namespace chemofv;

namespace {

SchemeParams params() {
  SchemeParams p;
  p.epsilon = 1.0;
  p.delta = 1.0;
  p.beta = 3.39;
  p.schedule = TimeSchedule::constant(0.1, 1.0);
  return p;
}

State bumpy(const Mesh& m) {
  State s{DiscreteField(m), DiscreteField(m)};
  for (std::size_t k = 0; k < m.num_cells(); ++k) {
    const Point c = m.cell(k).center;
    s.u[k] = 6.0 + std::sin(3.0 * c.x) * std::cos(2.0 * c.y);
    s.v[k] = 1.8 + 0.2 * std::cos(5.0 * c.x);
  }
  return s;
}

Mesh disk(int boundary) {
  const Triangulation t = disk_mesh(1.0, boundary);
  return build_from_triangulation(t.vertices, t.triangles);
}

}  // namespace

static void BM_Step1D(benchmark::State& st) {
  const Mesh m = build_uniform_1d(0.0, 1.0, static_cast<int>(st.range(0)));
  Stepper stepper(m, params());
  State s = bumpy(m);
  for (auto _ : st) {
    s = stepper.step(s, 0.1);
    benchmark::DoNotOptimize(s.u[0]);
  }
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Step1D)->RangeMultiplier(4)->Range(100, 6400)->Complexity();

static void BM_Step2D(benchmark::State& st) {
  const Mesh m = disk(static_cast<int>(st.range(0)));
  Stepper stepper(m, params());
  State s = bumpy(m);
  for (auto _ : st) {
    s = stepper.step(s, 0.1);
    benchmark::DoNotOptimize(s.u[0]);
  }
  st.counters["cells"] = static_cast<double>(m.num_cells());
}
BENCHMARK(BM_Step2D)->Arg(60)->Arg(120)->Arg(252);

static void BM_AssembleMu(benchmark::State& st) {
  const Mesh m = disk(static_cast<int>(st.range(0)));
  const State s = bumpy(m);
  const SchemeParams p = params();
  for (auto _ : st) benchmark::DoNotOptimize(assemble_Mu(m, p, 0.1, s.v));
  st.counters["cells"] = static_cast<double>(m.num_cells());
}
BENCHMARK(BM_AssembleMu)->Arg(60)->Arg(252);

static void BM_DualNorm(benchmark::State& st) {
  const Mesh m = disk(static_cast<int>(st.range(0)));
  const DualNorm n(m);
  DiscreteField w = bumpy(m).u;
  w += -mean_value(m, w);
  for (auto _ : st) benchmark::DoNotOptimize(n(w));
  st.counters["cells"] = static_cast<double>(m.num_cells());
}
BENCHMARK(BM_DualNorm)->Arg(60)->Arg(252);

BENCHMARK_MAIN();
