#include <benchmark/benchmark.h>

#include "qzs/experiments.hpp"
#include "qzs/stepper.hpp"

using namespace qzs;

namespace {

FieldState soliton(int nx) {
  auto g = make_grid({-128.0, 128.0}, nx);
  return make_initial_state(g, init_zs_soliton(*g, {}));
}

FieldState cosine(int n) {
  auto g = make_grid({-8.0, 8.0}, n, {-8.0, 8.0}, n);
  return make_initial_state(g, init_cosine_2d(*g));
}

void run_steps(benchmark::State& bs, FieldState s, int stages, double eps) {
  SolverParams p;
  p.tau = 0.05;
  p.epsilon = eps;
  Stepper stepper(s.grid, gauss_tableau(stages), p);
  int sweeps = 0;
  for (auto _ : bs) {
    sweeps += stepper.step(s).iterations;
    benchmark::DoNotOptimize(s.E.data());
  }
  bs.counters["sweeps_per_step"] = benchmark::Counter(sweeps, benchmark::Counter::kAvgIterations);
  bs.SetItemsProcessed(bs.iterations() * static_cast<std::int64_t>(s.grid->size()));
}

void BM_Step1D(benchmark::State& bs) {
  run_steps(bs, soliton(static_cast<int>(bs.range(0))), static_cast<int>(bs.range(1)), 0.0);
}
BENCHMARK(BM_Step1D)->ArgsProduct({{1024, 2048, 4096}, {1, 2, 3}})->Unit(benchmark::kMicrosecond);

void BM_Step2D(benchmark::State& bs) {
  run_steps(bs, cosine(static_cast<int>(bs.range(0))), static_cast<int>(bs.range(1)), 0.125);
}
BENCHMARK(BM_Step2D)->ArgsProduct({{64, 128, 256}, {2, 3}})->Unit(benchmark::kMillisecond);

void BM_Laplacian(benchmark::State& bs) {
  auto g = make_grid({-8.0, 8.0}, static_cast<int>(bs.range(0)), {-8.0, 8.0}, static_cast<int>(bs.range(0)));
  const RealField f(g->size(), 1.0);
  for (auto _ : bs) benchmark::DoNotOptimize(apply_laplacian(*g, f));
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
