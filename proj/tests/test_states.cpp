#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "oracles.hpp"
#include "phasespace/distributions.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/states.hpp"

using namespace phasespace;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Io;
}

const std::vector<StateSpec>& gaussian_specs() {
  static const std::vector<StateSpec> specs = {
      Coherent{{0.7, 0.3}},
      ThermalCoherent{{-0.4, 0.6}, 0.3},
      SqueezedThermalCoherent{{0.5, -0.2}, std::polar(0.3, 0.7), 0.2},
      SqueezedThermalCoherent{{0.0, 0.5}, std::polar(0.5, -1.1), 0.0},
  };
  return specs;
}

}  // namespace

TEST(DensityMatrix, CoherentVacuum) {
  const TruncatedOperator rho = density_matrix(Coherent{0.0}, 10);
  EXPECT_NEAR(std::abs(rho(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR((rho.matrix().cwiseAbs().sum()), 1.0, 1e-15);
}

TEST(DensityMatrix, ThermalDiagonal) {
  const double f = 0.4;
  const TruncatedOperator rho = density_matrix(ThermalCoherent{0.0, f}, 60);
  for (int n = 0; n < 60; ++n) EXPECT_NEAR(std::abs(rho(n, n) - (1.0 - f) * std::pow(f, n)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-15);
}

TEST(DensityMatrix, SqueezedThermalPurity) {
  const double f = 0.2;
  const TruncatedOperator rho = density_matrix(SqueezedThermalCoherent{0.5, 0.3, f}, 40);
  EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-10);
  EXPECT_NEAR((rho * rho).trace().real(), (1.0 - f) / (1.0 + f), 1e-8);
  EXPECT_TRUE(diagnose_density(rho).valid);
}

TEST(DensityMatrix, ValidForAllFamilies) {
  for (const StateSpec& s : gaussian_specs()) EXPECT_TRUE(diagnose_density(density_matrix(s, 40)).valid) << describe(s);
  EXPECT_TRUE(diagnose_density(density_matrix(NumberDiagonal{{0.2, 0.5, 0.3}}, 10)).valid);
}

TEST(DensityMatrix, TailMassGuard) {
  EXPECT_EQ(kind_of([] { density_matrix(Coherent{4.0}, 20); }), ErrorKind::Truncation);
  EXPECT_EQ(kind_of([] { density_matrix(NumberDiagonal{{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0}}, 8); }),
            ErrorKind::Truncation);
}

TEST(Validate, RejectsBadSpecs) {
  EXPECT_EQ(kind_of([] { validate(ThermalCoherent{0.0, 1.0}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { validate(ThermalCoherent{0.0, -0.1}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { validate(SqueezedThermalCoherent{0.0, 1.6, 0.0}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { validate(NumberDiagonal{{0.5, 0.4}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { validate(NumberDiagonal{{1.2, -0.2}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { validate(NumberDiagonal{}); }), ErrorKind::InvalidArgument);
}

TEST(Describe, CanonicalText) {
  EXPECT_EQ(describe(Coherent{{1.0, -0.5}}), "coherent(alpha0=1-0.5i)");
  EXPECT_EQ(describe(ThermalCoherent{0.25, 0.3}), "thermal-coherent(alpha0=0.25+0i, f=0.3)");
  EXPECT_EQ(describe(SqueezedThermalCoherent{0.0, {0.5, 0.1}, 0.0}),
            "squeezed-thermal-coherent(alpha0=0+0i, z=0.5+0.1i, f=0)");
  EXPECT_EQ(describe(NumberDiagonal{{0.0, 1.0}}), "number-diagonal(p=[0, 1])");
}

TEST(ThermalExponent, VacuumAndUnitOccupation) {
  const SU11Exponent zero = thermal_tfd_exponent(0.0);
  EXPECT_EQ(zero.plus, Complex(0.0));
  EXPECT_EQ(zero.k3, Complex(0.0));
  EXPECT_EQ(zero.minus, Complex(0.0));
  const SU11NormalForm one = disentangle(thermal_tfd_exponent(1.0));
  EXPECT_NEAR(std::abs(one.plus - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(one.minus - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(one.sqrt_k3 - 0.5), 0.0, 1e-15);
  EXPECT_THROW(thermal_tfd_exponent(-1.0), Error);
}

TEST(ThermalExponent, MaterializedStateMatchesDensity) {
  const int n = 30;
  const TwoModeOperator g = materialize(disentangle(thermal_tfd_exponent(0.25)), n);
  const CVector expected = tfd_vector(density_matrix(ThermalCoherent{0.0, 0.2}, n)).entries();
  EXPECT_LT((CVector(g.matrix().col(0)) - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ClosedForm, CoherentPeakIsOneOverPi) {
  const Complex a0(0.3, -1.2);
  EXPECT_NEAR(closed_form_phi(Coherent{a0}, OrderingParameter(0.0), a0), 1.0 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(closed_form_phi(Coherent{a0}, OrderingParameter(0.0), a0), 0.318310, 1e-6);
}

TEST(ClosedForm, CoherentWignerAtUnitDistance) {
  const double v = closed_form_phi(Coherent{0.0}, OrderingParameter(0.5), std::polar(1.0, 0.4));
  EXPECT_NEAR(v, 2.0 / std::numbers::pi * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(v, 0.0861571, 1e-7);
}

TEST(ClosedForm, ThermalAtOriginUsesNegativeExponent) {
  const double f = 0.5;
  EXPECT_NEAR(closed_form_phi(ThermalCoherent{0.0, f}, OrderingParameter(0.0), 0.0), (1.0 - f) / std::numbers::pi,
              1e-15);
  EXPECT_LT(closed_form_phi(ThermalCoherent{0.0, f}, OrderingParameter(0.0), 2.0),
            closed_form_phi(ThermalCoherent{0.0, f}, OrderingParameter(0.0), 0.0));
}

TEST(ClosedForm, SqueezedMatchesTraceOracle) {
  const StateSpec s = SqueezedThermalCoherent{0.0, 0.5, 0.3};
  const CMatrix rho = density_matrix(s, 60).matrix();
  for (double a : {0.0, -0.5, 0.5})
    for (Complex alpha : {Complex(0.4), Complex(-0.3, 0.8)})
      EXPECT_NEAR(closed_form_phi(s, OrderingParameter(a), alpha), oracle::phi_by_trace(rho, a, alpha), 1e-8)
          << "a=" << a << " alpha=" << alpha;
}

TEST(ClosedForm, AgreesWithOracleOnGrid) {
  const PhaseSpaceGrid grid(4.0, 17);
  EvalOptions options;
  options.enforce_coverage = false;
  options.cutoff = 64;
  for (const StateSpec& s : gaussian_specs())
    for (double a : {-1.0, -0.5, 0.0, 0.5}) {
      const double d = max_abs_diff(evaluate_grid(s, OrderingParameter(a), grid, EvalMethod::ClosedForm, options),
                                    evaluate_grid(s, OrderingParameter(a), grid, EvalMethod::Oracle, options));
      EXPECT_LT(d, 1e-7) << describe(s) << " a=" << a;
    }
}

TEST(ClosedForm, NoSqueezeReducesToThermal) {
  for (double a : {-1.0, 0.0, 0.5})
    for (Complex alpha : {Complex(0.0), Complex(1.3, -0.4)}) {
      const double sq = closed_form_phi(SqueezedThermalCoherent{{0.2, 0.1}, 0.0, 0.35}, OrderingParameter(a), alpha);
      const double th = closed_form_phi(ThermalCoherent{{0.2, 0.1}, 0.35}, OrderingParameter(a), alpha);
      EXPECT_NEAR(sq, th, 1e-15 * std::max(1.0, th));
    }
}

TEST(ClosedForm, ZeroTemperatureReducesToCoherent) {
  for (double a : {-1.0, 0.0, 0.5})
    for (Complex alpha : {Complex(0.0), Complex(1.3, -0.4)})
      EXPECT_NEAR(closed_form_phi(ThermalCoherent{0.5, 0.0}, OrderingParameter(a), alpha),
                  closed_form_phi(Coherent{0.5}, OrderingParameter(a), alpha), 1e-15);
}

TEST(ClosedForm, DisplacementCovariance) {
  const Complex beta(0.6, -0.9);
  for (const StateSpec& s : gaussian_specs())
    for (Complex alpha : {Complex(0.0), Complex(1.1, 0.4)}) {
      const OrderingParameter a(-0.5);
      EXPECT_NEAR(closed_form_phi(shifted(s, beta), a, alpha), closed_form_phi(s, a, alpha - beta), 1e-15)
          << describe(s);
    }
  EXPECT_EQ(kind_of([&] { shifted(NumberDiagonal{{1.0}}, beta); }), ErrorKind::Unsupported);
}

TEST(ClosedForm, PLimit) {
  const PhiSample s = closed_form_sample(Coherent{{1.0, 2.0}}, OrderingParameter(1.0), 0.0);
  ASSERT_TRUE(std::holds_alternative<DeltaDescriptor>(s));
  EXPECT_EQ(std::get<DeltaDescriptor>(s).center, Complex(1.0, 2.0));
  EXPECT_EQ(kind_of([] { closed_form_sample(ThermalCoherent{0.0, 0.3}, OrderingParameter(1.0), 0.0); }),
            ErrorKind::SingularOrder);
  EXPECT_EQ(kind_of([] { closed_form_phi(Coherent{0.0}, OrderingParameter(1.0), 0.0); }), ErrorKind::SingularOrder);
}

TEST(ClosedForm, OutOfFamily) {
  EXPECT_EQ(kind_of([] { closed_form_phi(SqueezedThermalCoherent{0.0, 1.0, 0.0}, OrderingParameter(0.9), 0.0); }),
            ErrorKind::OutOfFamily);
}

TEST(ClosedForm, NumberStatesHaveNone) {
  EXPECT_FALSE(has_closed_form(NumberDiagonal{{0.0, 1.0}}));
  EXPECT_EQ(kind_of([] { closed_form_phi(NumberDiagonal{{0.0, 1.0}}, OrderingParameter(0.0), 0.0); }),
            ErrorKind::Unsupported);
}

TEST(ClosedForm, NonnegativeForNonpositiveOrders) {
  for (const StateSpec& s : gaussian_specs())
    for (double a : {-1.0, -0.3, 0.0})
      for (double x = -4.0; x <= 4.0; x += 0.5)
        for (double y = -4.0; y <= 4.0; y += 0.5) EXPECT_GE(closed_form_phi(s, OrderingParameter(a), {x, y}), 0.0);
}
