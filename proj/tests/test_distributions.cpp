#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "phasespace/distributions.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/states.hpp"

using namespace phasespace;

namespace {

EvalOptions pointwise() {
  EvalOptions o;
  o.enforce_coverage = false;
  return o;
}

DistributionField closed(const StateSpec& s, double a, const PhaseSpaceGrid& g) {
  return evaluate_grid(s, OrderingParameter(a), g, EvalMethod::ClosedForm);
}

TruncatedOperator one_photon(int n = 30) { return density_matrix(NumberDiagonal{{0.0, 1.0}}, n); }

}  // namespace

TEST(Grid, Geometry) {
  const PhaseSpaceGrid g(2.0, 5);
  EXPECT_EQ(g.size(), 25u);
  EXPECT_DOUBLE_EQ(g.spacing(), 1.0);
  EXPECT_EQ(g.point(12), Complex(0.0, 0.0));
  EXPECT_EQ(g.point(1), Complex(-1.0, -2.0));
  EXPECT_DOUBLE_EQ(g.weight(0), 0.25);
  EXPECT_DOUBLE_EQ(g.weight(12), 1.0);
  EXPECT_THROW(PhaseSpaceGrid(1.0, 4), Error);
  EXPECT_THROW(PhaseSpaceGrid(-1.0, 5), Error);
}

TEST(Oracle, VacuumQAtOrigin) {
  EXPECT_NEAR(phi_from_density(density_matrix(Coherent{0.0}, 10), OrderingParameter(0.0), 0.0), 1.0 / std::numbers::pi,
              1e-15);
}

TEST(Oracle, CoherentWignerAtOrigin) {
  EXPECT_NEAR(phi_from_density(density_matrix(Coherent{1.0}, 40), OrderingParameter(0.5), 0.0),
              2.0 / std::numbers::pi * std::exp(-2.0), 1e-12);
}

TEST(Oracle, ThermalAtMinusOne) {
  const StateSpec s = ThermalCoherent{0.0, 0.4};
  EXPECT_NEAR(phi_from_density(density_matrix(s, 60), OrderingParameter(-1.0), 0.7),
              closed_form_phi(s, OrderingParameter(-1.0), 0.7), 1e-8);
}

TEST(Oracle, OnePhotonWignerIsNegativeAtOrigin) {
  const double v = phi_from_density(one_photon(), OrderingParameter(0.5), 0.0);
  EXPECT_NEAR(v, -2.0 / std::numbers::pi, 1e-12);
  EXPECT_NEAR(v, -0.6366, 1e-4);
}

TEST(Oracle, VariantsAgree) {
  std::mt19937_64 rng(21);
  const TruncatedOperator rho(oracle::random_density(8, rng));
  const DensityOracle direct(rho, OrderingParameter(-0.5), DensityOracle::Variant::Direct);
  const DensityOracle spectral(rho, OrderingParameter(-0.5), DensityOracle::Variant::Spectral);
  for (Complex alpha : {Complex(0.0), Complex(1.0, 1.0), Complex(-2.5, 0.3)})
    EXPECT_NEAR(direct(alpha), spectral(alpha), 1e-13);
}

TEST(Oracle, ImaginaryResidueIsTiny) {
  std::mt19937_64 rng(22);
  const TruncatedOperator rho(oracle::random_density(10, rng));
  const DensityOracle direct(rho, OrderingParameter(0.25), DensityOracle::Variant::Direct);
  for (Complex alpha : {Complex(0.0), Complex(0.7, -1.3), Complex(2.0, 2.0)})
    EXPECT_LT(direct.sample(alpha).imag_residue, 1e-10);
}

TEST(Oracle, UncertifiedAboveOneHalf) {
  const TruncatedOperator rho = density_matrix(Coherent{0.5}, 20);
  EXPECT_TRUE(DensityOracle(rho, OrderingParameter(0.5)).certified());
  EXPECT_FALSE(DensityOracle(rho, OrderingParameter(0.7)).certified());
  EXPECT_THROW(DensityOracle(rho, OrderingParameter(1.0)), Error);
}

TEST(DeltaOperator, ZeroOrderIsCoherentProjector) {
  const Complex alpha(0.5, -0.4);
  const CMatrix d = delta_operator(OrderingParameter(0.0), alpha, 30).matrix();
  const CVector c = coherent_amplitudes(alpha, 30);
  EXPECT_LT((d - c * c.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(DeltaOperator, Hermitian) {
  const CMatrix d = delta_operator(OrderingParameter(-0.5), {1.0, 1.0}, 40).matrix();
  EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DeltaOperator, TracePairingMatchesGeneratingFunction) {
  std::mt19937_64 rng(23);
  const int n = 8;
  const CMatrix rho = oracle::random_density(n, rng);
  for (Complex alpha : {Complex(0.0), Complex(0.8, -0.6), Complex(-1.5, 0.2)}) {
    const double via_delta =
        (rho * delta_operator(OrderingParameter(-0.5), alpha, n).matrix()).trace().real() / std::numbers::pi;
    const double via_expm = oracle::phi_by_trace(rho, -0.5, alpha);
    const double via_sum = phi_from_density(TruncatedOperator(rho), OrderingParameter(-0.5), alpha);
    EXPECT_NEAR(via_delta, via_sum, 1e-10);
    EXPECT_NEAR(via_expm, via_sum, 1e-10);
  }
}

TEST(Evaluate, CoherentNormalization) {
  const DistributionField q = closed(Coherent{1.0}, 0.0, PhaseSpaceGrid(5.0, 101));
  EXPECT_NEAR(integrate(q), 1.0, 2e-3);
  const DistributionField o =
      evaluate_grid(Coherent{1.0}, OrderingParameter(0.0), PhaseSpaceGrid(5.0, 101), EvalMethod::Oracle);
  EXPECT_LT(max_abs_diff(q, o), 1e-7);
  EXPECT_EQ(o.provenance.method, Method::Oracle);
  EXPECT_EQ(q.provenance.method, Method::ClosedForm);
}

TEST(Evaluate, NormalizationAcrossOrders) {
  const PhaseSpaceGrid g(8.0, 121);
  for (const StateSpec& s : {StateSpec{Coherent{{1.0, 0.5}}}, StateSpec{ThermalCoherent{{0.5, 0.0}, 0.3}},
                             StateSpec{SqueezedThermalCoherent{{0.0, 0.5}, 0.3, 0.2}}})
    for (double a : {-1.0, -0.5, 0.0, 0.5}) EXPECT_NEAR(integrate(closed(s, a, g)), 1.0, 5e-3) << describe(s) << a;
  EXPECT_NEAR(integrate(evaluate_grid(one_photon(), OrderingParameter(0.5), PhaseSpaceGrid(6.0, 61), "one")), 1.0,
              5e-3);
}

TEST(Evaluate, QIsNonnegative) {
  const PhaseSpaceGrid g(4.0, 41);
  for (const TruncatedOperator& rho : {one_photon(), density_matrix(SqueezedThermalCoherent{0.3, 0.5, 0.1}, 60),
                                       density_matrix(NumberDiagonal{{0.1, 0.2, 0.3, 0.4}}, 20)}) {
    const DistributionField q = evaluate_grid(rho, OrderingParameter(0.0), g, "q", pointwise());
    for (double v : q.values) EXPECT_GE(v, -1e-10);
  }
}

TEST(Evaluate, CoverageRule) {
  EXPECT_THROW(evaluate_grid(Coherent{3.0}, OrderingParameter(0.0), PhaseSpaceGrid(5.0, 11), EvalMethod::ClosedForm),
               Error);
  EXPECT_NO_THROW(
      evaluate_grid(Coherent{3.0}, OrderingParameter(0.0), PhaseSpaceGrid(5.0, 11), EvalMethod::ClosedForm, pointwise()));
}

TEST(Evaluate, NumberStateRequiresOracle) {
  try {
    evaluate_grid(NumberDiagonal{{0.0, 1.0}}, OrderingParameter(0.0), PhaseSpaceGrid(5.0, 11), EvalMethod::ClosedForm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
}

TEST(Evaluate, SerialAndParallelAreIdentical) {
  const PhaseSpaceGrid g(4.0, 31);
  EvalOptions serial = pointwise(), parallel = pointwise();
  serial.execution = Execution::Serial;
  parallel.execution = Execution::Parallel;
  const TruncatedOperator rho = density_matrix(SqueezedThermalCoherent{0.3, 0.4, 0.2}, 40);
  const DistributionField x = evaluate_grid(rho, OrderingParameter(-0.5), g, "s", serial);
  const DistributionField y = evaluate_grid(rho, OrderingParameter(-0.5), g, "s", parallel);
  EXPECT_EQ(x.values, y.values);
}

TEST(Convolve, QToMinusOne) {
  const PhaseSpaceGrid g(9.0, 181);
  const Complex a0(0.5, -0.5);
  const DistributionField got = convolve_to_lower_order(closed(Coherent{a0}, 0.0, g), 1.0);
  EXPECT_EQ(got.order.value(), -1.0);
  EXPECT_EQ(got.provenance.method, Method::Convolved);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(got.values[i] - oracle::coherent_phi(-1.0, a0, g.point(i))));
  EXPECT_LT(worst, 1e-4);
  EXPECT_NEAR(integrate(got), 1.0, 5e-3);
}

TEST(Convolve, NarrowKernelBarelyChangesField) {
  const PhaseSpaceGrid g(6.0, 161);
  const DistributionField q = closed(Coherent{0.3}, 0.0, g);
  EXPECT_LT(max_abs_diff(convolve_to_lower_order(q, 1e-3), q), 2e-3);
}

TEST(Convolve, OnePhotonWignerToQ) {
  const PhaseSpaceGrid g(8.0, 161);
  const DistributionField w = evaluate_grid(one_photon(), OrderingParameter(0.5), g, "one");
  const DistributionField q = convolve_to_lower_order(w, 0.5);
  for (double v : q.values) EXPECT_GE(v, -1e-6);
  const DistributionField direct = evaluate_grid(one_photon(), OrderingParameter(0.0), g, "one");
  EXPECT_LT(max_abs_diff(q, direct), 1e-4);
}

TEST(Convolve, MarginViolation) {
  const DistributionField q = closed(Coherent{0.0}, 0.0, PhaseSpaceGrid(4.5, 31));
  try {
    convolve_to_lower_order(q, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Coverage);
  }
}

TEST(OrderCheck, SecondOrderScaling) {
  const PhaseSpaceGrid g(5.0, 201);
  const StateSpec s = Coherent{{0.5, 0.2}};
  const OrderCheckReport r1 = differential_order_check(closed(s, 0.0, g), closed(s, -0.02, g));
  const OrderCheckReport r2 = differential_order_check(closed(s, 0.0, g), closed(s, -0.01, g));
  EXPECT_TRUE(r1.passed);
  EXPECT_TRUE(r2.passed);
  EXPECT_GT(r1.max_residual, 1e-5);
  EXPECT_LT(r1.max_residual, 1e-3);
  EXPECT_NEAR(std::log2(r1.max_residual / r2.max_residual), 2.0, 0.1);
}

TEST(OrderCheck, ThermalExponent) {
  const PhaseSpaceGrid g(6.0, 201);
  const StateSpec s = ThermalCoherent{0.0, 0.5};
  const OrderCheckReport r1 = differential_order_check(closed(s, 0.0, g), closed(s, -0.04, g));
  const OrderCheckReport r2 = differential_order_check(closed(s, 0.0, g), closed(s, -0.02, g));
  EXPECT_NEAR(std::log2(r1.max_residual / r2.max_residual), 2.0, 0.1);
}

TEST(OrderCheck, EqualOrdersGiveZero) {
  const PhaseSpaceGrid g(5.0, 51);
  const DistributionField q = closed(Coherent{0.0}, 0.0, g);
  const OrderCheckReport r = differential_order_check(q, q);
  EXPECT_EQ(r.max_residual, 0.0);
  EXPECT_TRUE(r.passed);
}

TEST(Integrate, ZeroField) {
  DistributionField q = closed(Coherent{0.0}, 0.0, PhaseSpaceGrid(5.0, 21));
  std::fill(q.values.begin(), q.values.end(), 0.0);
  EXPECT_EQ(integrate(q), 0.0);
}

TEST(Integrate, HalfCoverageIsFlagged) {
  const DistributionField q =
      evaluate_grid(Coherent{0.0}, OrderingParameter(0.0), PhaseSpaceGrid(1.0, 101), EvalMethod::ClosedForm, pointwise());
  const IntegralReport r = integrate_checked(q);
  EXPECT_FALSE(r.covered);
  EXPECT_FALSE(r.warning.empty());
  const double expected = std::pow(std::erf(1.0), 2);
  EXPECT_NEAR(r.value, expected, 2e-3);
}

TEST(OverlapTrace, PureWignerPurity) {
  const PhaseSpaceGrid g(6.0, 121);
  const DistributionField w = closed(Coherent{{0.4, 0.1}}, 0.5, g);
  EXPECT_NEAR(overlap_trace(w, w), 1.0, 5e-3);
}

TEST(OverlapTrace, CoherentOverlap) {
  const PhaseSpaceGrid g(6.0, 121);
  const Complex a0(0.5, 0.0), a1(-0.5, 0.0);
  const double got = overlap_trace(closed(Coherent{a0}, 0.5, g), closed(Coherent{a1}, 0.5, g));
  const CVector u = coherent_amplitudes(a0, 40), v = coherent_amplitudes(a1, 40);
  EXPECT_NEAR(got, std::norm(u.dot(v)), 5e-3);
  EXPECT_NEAR(got, std::exp(-1.0), 5e-3);
}

TEST(OverlapTrace, ThermalPurity) {
  const PhaseSpaceGrid g(8.0, 161);
  const StateSpec s = ThermalCoherent{0.0, 0.5};
  const TruncatedOperator rho = density_matrix(s, 60);
  const double got = overlap_trace(closed(s, 0.5, g), closed(s, 0.5, g));
  EXPECT_NEAR(got, (rho * rho).trace().real(), 5e-3);
  EXPECT_NEAR(got, 1.0 / 3.0, 5e-3);
}

TEST(OverlapTrace, Mismatches) {
  const PhaseSpaceGrid g(5.0, 21);
  const DistributionField q = closed(Coherent{0.0}, 0.0, g);
  try {
    overlap_trace(q, q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderMismatch);
  }
  const DistributionField w = closed(Coherent{0.0}, 0.5, g);
  const DistributionField other = closed(Coherent{0.0}, 0.5, PhaseSpaceGrid(5.0, 23));
  try {
    overlap_trace(w, other);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridMismatch);
  }
}

TEST(DeltaIdentities, IntegratedTraceIsOne) {
  std::mt19937_64 rng(24);
  const TruncatedOperator rho(oracle::random_density(3, rng));
  const DistributionField f = evaluate_grid(rho, OrderingParameter(-0.5), PhaseSpaceGrid(7.0, 101), "r");
  EXPECT_NEAR(integrate(f), 1.0, 1e-3);
}
