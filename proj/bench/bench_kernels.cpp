#include <benchmark/benchmark.h>

#include "phasespace/distributions.hpp"
#include "phasespace/evolution.hpp"
#include "phasespace/states.hpp"

using namespace phasespace;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_OracleGrid(benchmark::State& state) {
  const TruncatedOperator rho = density_matrix(SqueezedThermalCoherent{{0.5, 0.2}, 0.3, 0.2}, 48);
  const PhaseSpaceGrid grid(6.0, 61);
  EvalOptions options;
  options.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_grid(rho, OrderingParameter(-0.5), grid, "bench", options));
}

void BM_ClosedFormGrid(benchmark::State& state) {
  const StateSpec s = SqueezedThermalCoherent{{0.5, 0.2}, 0.3, 0.2};
  const PhaseSpaceGrid grid(6.0, 161);
  EvalOptions options;
  options.execution = mode(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_grid(s, OrderingParameter(0.0), grid, EvalMethod::ClosedForm, options));
}

void BM_KerrCoherentGrid(benchmark::State& state) {
  const MasterEquationParams model = KerrDamped{1.0, 0.5, 0.2, 0.0};
  const PhaseSpaceGrid grid(4.0, 41);
  for (auto _ : state)
    benchmark::DoNotOptimize(evolve_coherent_grid(model, 1.5, OrderingParameter(0.0), 1.0, grid, mode(state)));
}

void BM_KernelQuadrature(benchmark::State& state) {
  const MasterEquationParams model = KerrDamped{1.0, 0.0, 0.5, 0.2};
  const PhaseSpaceGrid grid(6.0, 61);
  const DistributionField q0 = evaluate_grid(Coherent{0.8}, OrderingParameter(0.0), grid, EvalMethod::ClosedForm);
  for (auto _ : state)
    benchmark::DoNotOptimize(phi_evolved_from_field(model, OrderingParameter(0.0), 0.5, q0, mode(state)));
}

void BM_Convolution(benchmark::State& state) {
  const PhaseSpaceGrid grid(9.0, 161);
  const DistributionField q0 = evaluate_grid(Coherent{0.5}, OrderingParameter(0.0), grid, EvalMethod::ClosedForm);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_to_lower_order(q0, 1.0, mode(state)));
}

}  // namespace

BENCHMARK(BM_OracleGrid)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClosedFormGrid)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KerrCoherentGrid)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelQuadrature)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Convolution)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
