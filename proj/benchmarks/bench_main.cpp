#include <benchmark/benchmark.h>

#include "ceco/cabin_model.hpp"
#include "ceco/comfort.hpp"
#include "ceco/mpc.hpp"
#include "ceco/nlp_solver.hpp"

namespace {

using namespace ceco;

void BM_PmvModified(benchmark::State& state) {
  const OccupantParams occ;
  double t = 24.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pmv_modified(t, 10.0, 28.0, 0.11, 20.0, occ));
    t = t < 30.0 ? t + 1e-6 : 24.0;
  }
}
BENCHMARK(BM_PmvModified);

void BM_PlantStep(benchmark::State& state) {
  const SurrogatePlant plant(PlantParams{});
  ACState x;
  const ControlInput u{0.12, 278.15};
  const ExogenousSample ex{10.0, 700.0, 308.15};
  for (auto _ : state) {
    x = plant.step(x, u, ex);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_PlantStep);

PreviewWindow bench_preview(int np) {
  PreviewWindow pv;
  for (int i = 0; i <= np; ++i) {
    pv.exogenous.push_back({12.0, 700.0, 308.15});
    pv.pmv_lb.push_back(-0.5);
    pv.pmv_ub.push_back(1.0);
  }
  return pv;
}

void BM_RolloutObjective(benchmark::State& state) {
  const MpcModel model;
  const ACState x0{305.0, 284.0, 308.0, 312.0};
  const NlpProblem p = build_general_ocp(model, x0, bench_preview(model.config.np));
  std::vector<double> z(static_cast<std::size_t>(p.dimension));
  for (int i = 0; i < model.config.np; ++i) {
    z[static_cast<std::size_t>(i)] = 0.11;
    z[static_cast<std::size_t>(model.config.np + i)] = 279.65;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.objective(z));
  }
}
BENCHMARK(BM_RolloutObjective);

void BM_MpcStepWarm(benchmark::State& state) {
  const MpcModel model;
  const ACState x0{301.0, 279.5, 303.0, 309.0};
  const PreviewWindow pv = bench_preview(model.config.np);
  const MpcStepResult first = mpc_step(model, ControllerKind::kCecoE, x0, pv, nullptr);
  std::vector<double> warm = first.solution.z_opt;
  for (auto _ : state) {
    const MpcStepResult r = mpc_step(model, ControllerKind::kCecoE, x0, pv, &warm);
    benchmark::DoNotOptimize(r.control);
  }
}
BENCHMARK(BM_MpcStepWarm);

}  // namespace

BENCHMARK_MAIN();
