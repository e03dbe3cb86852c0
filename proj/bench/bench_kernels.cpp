// Serial against OpenMP paths of the pointwise kernels, plus one full step.
// Thread count follows BWM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "bwm/initial.hpp"
#include "bwm/integrator.hpp"
#include "bwm/kernels.hpp"

namespace {

using namespace bwm;

const ManifoldSpec kSphere = ManifoldSpec::sphere(3);
const ManifoldSpec kTorus = ManifoldSpec::torus(2, 0.5);

SimulationState state(const ManifoldSpec& m, int M) {
  std::mt19937_64 rng(17);
  return random_tangent_state(Grid::make(2, M), m, 4, 0.8, 0.8, rng);
}

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_ProjectorProducts(benchmark::State& st, const ManifoldSpec* m) {
  const SimulationState s = state(*m, int(st.range(0)));
  const GridField grad = gradient(s.u);
  const GridField lap = laplacian(s.u);
  for (auto _ : st) {
    benchmark::DoNotOptimize(projector_products(*m, s.u, grad, lap, exec_of(st)));
  }
  st.SetItemsProcessed(st.iterations() * s.u.num_points());
}

void BM_Retract(benchmark::State& st) {
  const SimulationState s = state(kTorus, int(st.range(0)));
  const GridField pushed = s.u + 1e-3 * s.ut;
  for (auto _ : st) benchmark::DoNotOptimize(retract_field(kTorus, pushed, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * s.u.num_points());
}

void BM_KickSphere(benchmark::State& st) {
  const SimulationState s = state(kSphere, int(st.range(0)));
  for (auto _ : st) {
    benchmark::DoNotOptimize(kick_sphere(s.u, s.ut, s.ut, 1e-3, exec_of(st)));
  }
  st.SetItemsProcessed(st.iterations() * s.u.num_points());
}

void BM_StrangStep(benchmark::State& st) {
  const SimulationState s = state(kSphere, int(st.range(0)));
  SchemeConfig c;
  c.dt = 1e-3;
  for (auto _ : st) benchmark::DoNotOptimize(step(kSphere, s, c));
}

void grid_sizes(benchmark::internal::Benchmark* b) {
  for (int M : {32, 64, 128}) {
    for (int par : {0, 1}) b->Args({M, par});
  }
  b->ArgNames({"M", "parallel"});
}

BENCHMARK_CAPTURE(BM_ProjectorProducts, sphere, &kSphere)->Apply(grid_sizes);
BENCHMARK_CAPTURE(BM_ProjectorProducts, torus, &kTorus)->Apply(grid_sizes);
BENCHMARK(BM_Retract)->Apply(grid_sizes);
BENCHMARK(BM_KickSphere)->Apply(grid_sizes);
BENCHMARK(BM_StrangStep)->Arg(32)->Arg(64)->Arg(128);

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
