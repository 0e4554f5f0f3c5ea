#include <gtest/gtest.h>

#include <stdexcept>

#include "phasespace/distributions.hpp"
#include "phasespace/evolution.hpp"
#include "phasespace/parallel.hpp"

using namespace phasespace;

namespace {

EvalOptions with(Execution e) {
  EvalOptions o;
  o.execution = e;
  o.enforce_coverage = false;
  return o;
}

}  // namespace

TEST(Parallel, ClosedFormGridBitwiseEqual) {
  const PhaseSpaceGrid g(4.0, 41);
  const StateSpec s = SqueezedThermalCoherent{{0.4, -0.2}, 0.3, 0.25};
  EXPECT_EQ(evaluate_grid(s, OrderingParameter(-0.3), g, EvalMethod::ClosedForm, with(Execution::Serial)).values,
            evaluate_grid(s, OrderingParameter(-0.3), g, EvalMethod::ClosedForm, with(Execution::Parallel)).values);
}

TEST(Parallel, OracleGridBitwiseEqual) {
  const PhaseSpaceGrid g(4.0, 31);
  const StateSpec s = ThermalCoherent{{0.4, -0.2}, 0.25};
  EXPECT_EQ(evaluate_grid(s, OrderingParameter(0.5), g, EvalMethod::Oracle, with(Execution::Serial)).values,
            evaluate_grid(s, OrderingParameter(0.5), g, EvalMethod::Oracle, with(Execution::Parallel)).values);
}

TEST(Parallel, CoherentEvolutionBitwiseEqual) {
  const PhaseSpaceGrid g(4.0, 31);
  const MasterEquationParams model = KerrDamped{1.0, 0.4, 0.3, 0.1};
  EXPECT_EQ(evolve_coherent_grid(model, {0.8, 0.1}, OrderingParameter(0.0), 0.6, g, Execution::Serial).values,
            evolve_coherent_grid(model, {0.8, 0.1}, OrderingParameter(0.0), 0.6, g, Execution::Parallel).values);
}

TEST(Parallel, KernelQuadratureBitwiseEqual) {
  const PhaseSpaceGrid g(6.0, 41);
  const MasterEquationParams model = KerrDamped{1.0, 0.0, 0.5, 0.2};
  const DistributionField q0 = evaluate_grid(Coherent{0.5}, OrderingParameter(0.0), g, EvalMethod::ClosedForm);
  EXPECT_EQ(phi_evolved_from_field(model, OrderingParameter(0.0), 0.4, q0, Execution::Serial).values,
            phi_evolved_from_field(model, OrderingParameter(0.0), 0.4, q0, Execution::Parallel).values);
}

TEST(Parallel, ConvolutionBitwiseEqual) {
  const PhaseSpaceGrid g(9.0, 61);
  const DistributionField q0 = evaluate_grid(Coherent{0.5}, OrderingParameter(0.0), g, EvalMethod::ClosedForm);
  EXPECT_EQ(convolve_to_lower_order(q0, 0.7, Execution::Serial).values,
            convolve_to_lower_order(q0, 0.7, Execution::Parallel).values);
}

TEST(Parallel, ThreadCountRoundTrip) {
  const int before = thread_count();
  set_thread_count(1);
  EXPECT_EQ(thread_count(), 1);
  set_thread_count(before);
}

TEST(Parallel, MapIndicesPropagatesFirstError) {
  auto run = [](Execution e) {
    return map_indices<int>(e, 100, [](std::size_t i) {
      if (i == 37) throw std::runtime_error("index 37");
      return static_cast<int>(i);
    });
  };
  EXPECT_THROW(run(Execution::Serial), std::runtime_error);
  EXPECT_THROW(run(Execution::Parallel), std::runtime_error);
  const std::vector<int> ok = map_indices<int>(Execution::Parallel, 5, [](std::size_t i) { return 2 * static_cast<int>(i); });
  EXPECT_EQ(ok, (std::vector<int>{0, 2, 4, 6, 8}));
}
