#include "phasespace/cli/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "phasespace/distributions.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/evolution.hpp"
#include "phasespace/lindblad.hpp"
#include "phasespace/states.hpp"
#include "phasespace/su11.hpp"

namespace phasespace::cli {

namespace {

using Check = std::function<CheckResult()>;

CheckResult make(const std::string& name, double value, double tolerance, std::string detail = {}) {
  return {"", name, std::isfinite(value) && value <= tolerance, value, tolerance, std::move(detail)};
}

TruncatedOperator random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  CMatrix rho = m * m.adjoint();
  rho /= rho.trace();
  return TruncatedOperator(rho);
}

double vec_diff(const TwoModeVector& x, const TwoModeVector& y) {
  return (x.entries() - y.entries()).cwiseAbs().maxCoeff();
}

// exp of the su(1,1) exponent restricted to the sector K0 = k, basis
// |j + q, j> (k >= 0) or |j, j + q> (k < 0), q = |k|.
CMatrix sector_exponential(const SU11Exponent& e, int k, int dim) {
  const int q = std::abs(k);
  CMatrix x = CMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    x(j, j) = e.k3 * (2.0 * j + q + 1) / 2.0 + e.k0 * static_cast<double>(k) + e.scalar;
    if (j + 1 < dim) {
      const double r = std::sqrt((j + q + 1.0) * (j + 1.0));
      x(j + 1, j) = e.plus * r;
      x(j, j + 1) = e.minus * r;
    }
  }
  return x.exp();
}

double materialize_vs_padded(const SU11Exponent& e, int n) {
  const CMatrix m = materialize(disentangle(e), n).matrix();
  double worst = 0.0;
  for (int k = -(n - 1); k < n; ++k) {
    const int q = std::abs(k), d = n - q;
    const CMatrix s = sector_exponential(e, k, 3 * n);
    auto flat = [&](int j) { return k >= 0 ? (j + q) * n + j : j * n + j + q; };
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) worst = std::max(worst, std::abs(m(flat(i), flat(j)) - s(i, j)));
  }
  return worst;
}

double nf_diff(const SU11NormalForm& x, const SU11NormalForm& y) {
  return std::max({std::abs(x.plus - y.plus), std::abs(x.sqrt_k3 - y.sqrt_k3), std::abs(x.minus - y.minus),
                   std::abs(x.k0 - y.k0), std::abs(x.scalar - y.scalar)});
}

EvalOptions pointwise() {
  EvalOptions o;
  o.enforce_coverage = false;
  return o;
}

// --------------------------------------------------------------------------

std::vector<Check> fock_checks() {
  return {
      [] {
        const int n = 30;
        const auto [a, ad] = ladder_operators(n);
        const CMatrix c = (a * ad - ad * a).matrix() - CMatrix::Identity(n, n);
        return make("ladder commutator (lower block)", c.topLeftCorner(n - 1, n - 1).cwiseAbs().maxCoeff(), 1e-12);
      },
      [] {
        const int n = 30;
        const auto [a, ad] = ladder_operators(n);
        const TwoModeVector id = identity_state(n);
        return make("tilde rule a|I> = a~^dag|I>", vec_diff(lift(a).apply(id), tilde_lift(ad).apply(id)), 1e-12);
      },
      [] {
        const int n = 30;
        const auto [a, ad] = ladder_operators(n);
        const TwoModeVector id = identity_state(n);
        const TruncatedOperator num = number_operator(n);
        const double d = std::max(vec_diff(lift(ad).apply(id), tilde_lift(a).apply(id)),
                                  vec_diff(lift(num).apply(id), tilde_lift(num).apply(id)));
        return make("tilde monomials a^dag, a^dag a", d, 1e-12);
      },
      [] {
        const TruncatedOperator rho = density_matrix(ThermalCoherent{{0.6, -0.4}, 0.3}, 30);
        return make("<I|rho> = Tr rho", std::abs(overlap(identity_state(30), tfd_vector(rho)) - 1.0), 1e-12);
      },
      [] {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> g;
        CMatrix m(20, 20);
        for (int i = 0; i < 20; ++i)
          for (int j = 0; j < 20; ++j) m(i, j) = Complex(g(rng), g(rng)) * 0.1;
        const CMatrix p = matrix_exponential(m) * matrix_exponential(CMatrix(-m));
        return make("expm(M) expm(-M) = I", (p - CMatrix::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-12);
      },
      [] {
        const Complex alpha(0.7, 0.3);
        const CheckedOperator d = displacement_operator(alpha, 40);
        const double err = (d.op.matrix().col(0) - coherent_amplitudes(alpha, 40)).cwiseAbs().maxCoeff();
        return make("D(alpha)|0> = coherent amplitudes", err, 1e-9);
      },
      [] {
        const Complex alpha(0.7, 0.3);
        const CMatrix expm = displacement_operator(alpha, 40).op.matrix();
        const CMatrix exact = displacement_elements(alpha, 40, 40);
        return make("exact elements vs expm (lower block)",
                    (expm - exact).topLeftCorner(20, 20).cwiseAbs().maxCoeff(), 1e-9);
      },
      [] {
        const CheckedOperator s = squeeze_operator({0.5, 0.0}, 40);
        return make("<0|S(0.5)|0> = 1/sqrt(cosh 0.5)", std::abs(s.op(0, 0) - 1.0 / std::sqrt(std::cosh(0.5))), 1e-9);
      },
  };
}

std::vector<Check> algebra_checks() {
  std::vector<Check> checks = {
      [] {
        const int n = 10;
        const GeneratorSet g = su11_generators(n);
        const CMatrix c = (g.k_minus * g.k_plus - g.k_plus * g.k_minus - Complex(2.0) * g.k3).matrix();
        double worst = 0.0;
        for (int i = 0; i < n - 1; ++i)
          for (int j = 0; j < n - 1; ++j)
            for (int r = 0; r < n - 1; ++r)
              for (int s = 0; s < n - 1; ++s) worst = std::max(worst, std::abs(c(i * n + j, r * n + s)));
        return make("[K-, K+] = 2 K3 (interior)", worst, 1e-12);
      },
      [] {
        const int n = 10;
        const GeneratorSet g = su11_generators(n);
        const CMatrix up = (g.k3 * g.k_plus - g.k_plus * g.k3 - g.k_plus).matrix();
        const CMatrix down = (g.k3 * g.k_minus - g.k_minus * g.k3 + g.k_minus).matrix();
        const CMatrix central = (g.k0 * g.k_plus - g.k_plus * g.k0).matrix();
        return make("[K3, K+-] = +-K+-, [K0, K+] = 0",
                    std::max({up.cwiseAbs().maxCoeff(), down.cwiseAbs().maxCoeff(), central.cwiseAbs().maxCoeff()}),
                    1e-12);
      },
      [] {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        int accepted = 0, near_degenerate = 0;
        while (accepted < 8) {
          SU11Exponent e{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, {0.3 * u(rng), 0.3 * u(rng)},
                         {0.2 * u(rng), 0.0}};
          const bool degenerate = accepted >= 6;
          if (degenerate) e.minus = e.k3 * e.k3 / (4.0 * e.plus) * (1.0 + 1e-9 * u(rng));
          const SU11NormalForm nf = disentangle(e);
          if (std::abs(nf.plus) > 0.5 || std::abs(nf.minus) > 0.5 || std::abs(nf.sqrt_k3) > 1.0) continue;
          worst = std::max(worst, materialize_vs_padded(e, 12));
          ++accepted;
          near_degenerate += degenerate;
        }
        return make("disentangle vs padded expm", worst, 1e-8,
                    "N=12, " + std::to_string(accepted) + " sets, " + std::to_string(near_degenerate) +
                        " near phi^2 = 0");
      },
      [] {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        auto random_nf = [&] {
          return SU11NormalForm{{u(rng), u(rng)}, {1.0 + u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)},
                                {u(rng), u(rng)}};
        };
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
          const SU11NormalForm x = random_nf(), y = random_nf(), z = random_nf();
          worst = std::max(worst, nf_diff(compose(compose(x, y), z), compose(x, compose(y, z))));
        }
        return make("compose associativity", worst, 1e-12);
      },
      [] {
        const double nbar = 0.5, f = nbar / (1.0 + nbar);
        const int n = 30;
        const TwoModeOperator g = materialize(disentangle(thermal_tfd_exponent(nbar)), n);
        CMatrix rho = CMatrix::Zero(n, n);
        for (int k = 0; k < n; ++k) rho(k, k) = (1.0 - f) * std::pow(f, k);
        const CVector vac = CVector::Unit(static_cast<Eigen::Index>(n) * n, 0);
        const CVector out = g.matrix() * vac;
        return make("thermal vector from exp(nbar X0)|0,0>",
                    (out - vectorize(TruncatedOperator(rho)).entries()).cwiseAbs().maxCoeff(), 1e-12);
      },
  };
  for (const std::string& transform : {std::string("gamma_prime"), std::string("gamma_double_prime")}) {
    checks.push_back([transform] {
      for (const TransformArbitration& t : arbitrate_transforms(100, 20240601)) {
        if (t.transform != transform) continue;
        std::ostringstream detail;
        detail << "printed_dev=" << t.printed_max_deviation << " printed_agrees=" << (t.printed_agrees ? "yes" : "no")
               << " note=\"" << t.note << "\"";
        return make("arbitration " + transform, t.implemented_max_deviation, 1e-10, detail.str());
      }
      return make("arbitration " + transform, INFINITY, 1e-10, "transform missing");
    });
  }
  return checks;
}

std::vector<Check> states_checks() {
  return {
      [] {
        const PhaseSpaceGrid grid(3.0, 11);
        double worst = 0.0;
        for (double a : {-1.0, 0.0, 0.5}) {
          const StateSpec s = Coherent{{0.7, 0.3}};
          worst = std::max(worst, max_abs_diff(evaluate_grid(s, OrderingParameter(a), grid, EvalMethod::ClosedForm, pointwise()),
                                               evaluate_grid(s, OrderingParameter(a), grid, EvalMethod::Oracle, pointwise())));
        }
        return make("coherent closed form vs oracle", worst, 1e-7);
      },
      [] {
        const PhaseSpaceGrid grid(3.0, 11);
        double worst = 0.0;
        for (const StateSpec& s : {StateSpec{ThermalCoherent{{0.5, -0.2}, 0.3}},
                                   StateSpec{SqueezedThermalCoherent{{0.5, -0.2}, std::polar(0.3, 0.7), 0.3}}}) {
          EvalOptions o = pointwise();
          o.cutoff = 64;
          worst = std::max(worst, max_abs_diff(evaluate_grid(s, OrderingParameter(0.0), grid, EvalMethod::ClosedForm, o),
                                               evaluate_grid(s, OrderingParameter(0.0), grid, EvalMethod::Oracle, o)));
        }
        return make("thermal and squeezed closed form vs oracle", worst, 1e-7);
      },
      [] {
        double worst = 0.0;
        const Complex a0(0.4, 0.9);
        for (double a : {-0.5, 0.0, 0.5})
          for (Complex alpha : {Complex(0.0), Complex(1.0, -0.3), Complex(-0.8, 1.1)}) {
            const OrderingParameter o(a);
            worst = std::max(worst, std::abs(closed_form_phi(SqueezedThermalCoherent{a0, 0.0, 0.25}, o, alpha) -
                                             closed_form_phi(ThermalCoherent{a0, 0.25}, o, alpha)));
            worst = std::max(worst, std::abs(closed_form_phi(ThermalCoherent{a0, 0.0}, o, alpha) -
                                             closed_form_phi(Coherent{a0}, o, alpha)));
          }
        return make("r = 0 and f = 0 reductions", worst, 1e-14);
      },
      [] {
        const double r = 0.5;
        const TruncatedOperator rho = density_matrix(SqueezedThermalCoherent{0.0, r, 0.0}, 40);
        const auto [a, ad] = ladder_operators(40);
        const TruncatedOperator x = Complex(1.0 / std::sqrt(2.0)) * (a + ad);
        const double var = (rho * x * x).trace().real();
        return make("squeezed x variance e^{-2r}/2", std::abs(var - std::exp(-2.0 * r) / 2.0), 1e-6);
      },
      [] {
        const Moments m = moments(density_matrix(ThermalCoherent{0.0, 1.0 / 3.0}, 60));
        const Moments c = moments(density_matrix(Coherent{1.0}, 40));
        const double d = std::max({std::abs(m.purity - 0.5), std::abs(m.mean_n - 0.5), std::abs(c.purity - 1.0),
                                   std::abs(c.mean_n - 1.0), std::abs(c.mean_a - 1.0)});
        return make("thermal and coherent moments", d, 1e-9);
      },
  };
}

std::vector<Check> distributions_checks() {
  return {
      [] {
        const PhaseSpaceGrid grid(7.0, 101);
        double worst = 0.0;
        for (double a : {-1.0, 0.0, 0.5})
          worst = std::max(worst, std::abs(integrate(evaluate_grid(ThermalCoherent{{1.0, 0.5}, 0.2}, OrderingParameter(a),
                                                                   grid, EvalMethod::ClosedForm)) - 1.0));
        return make("normalization", worst, 5e-3);
      },
      [] {
        const PhaseSpaceGrid grid(4.0, 21);
        const DistributionField q = evaluate_grid(density_matrix(NumberDiagonal{{0.0, 1.0}}, 30), OrderingParameter(0.0),
                                                  grid, "one-photon", pointwise());
        double lowest = 0.0;
        for (double v : q.values) lowest = std::min(lowest, v);
        return make("Q nonnegative", -lowest, 1e-10);
      },
      [] {
        const TruncatedOperator rho = density_matrix(SqueezedThermalCoherent{{0.3, 0.2}, {0.2, 0.1}, 0.2}, 40);
        const DensityOracle oracle(rho, OrderingParameter(0.25), DensityOracle::Variant::Direct);
        double worst = 0.0;
        for (Complex alpha : {Complex(0.0), Complex(1.0, 0.5), Complex(-1.2, 0.8), Complex(2.0, -1.0)})
          worst = std::max(worst, oracle.sample(alpha).imag_residue);
        return make("realness (imag residue)", worst, 1e-10);
      },
      [] {
        const PhaseSpaceGrid grid(9.0, 181);
        const StateSpec s = Coherent{{1.0, -0.5}};
        const DistributionField w = evaluate_grid(s, OrderingParameter(0.5), grid, EvalMethod::ClosedForm);
        const DistributionField q = evaluate_grid(s, OrderingParameter(0.0), grid, EvalMethod::ClosedForm);
        return make("Gaussian convolution W -> Q", max_abs_diff(convolve_to_lower_order(w, 0.5), q), 1e-4);
      },
      [] {
        const PhaseSpaceGrid grid(5.0, 101);
        const StateSpec s = ThermalCoherent{{0.5, 0.5}, 0.3};
        const OrderCheckReport r =
            differential_order_check(evaluate_grid(s, OrderingParameter(0.0), grid, EvalMethod::ClosedForm),
                                     evaluate_grid(s, OrderingParameter(0.02), grid, EvalMethod::ClosedForm));
        return make("differential order relation", r.passed ? r.max_residual : INFINITY,
                    2.0 * r.second_order + 1e-12);
      },
      [] {
        const PhaseSpaceGrid grid(6.0, 121);
        const StateSpec x = ThermalCoherent{{0.3, 0.0}, 0.3};
        const StateSpec y = Coherent{{0.0, 0.2}};
        const double exact = (density_matrix(x, 40) * density_matrix(y, 40)).trace().real();
        const double viaphase = overlap_trace(evaluate_grid(x, OrderingParameter(0.25), grid, EvalMethod::ClosedForm),
                                              evaluate_grid(y, OrderingParameter(0.75), grid, EvalMethod::ClosedForm));
        return make("trace product identity", std::abs(exact - viaphase), 5e-3);
      },
  };
}

std::vector<Check> evolution_checks() {
  return {
      [] {
        std::mt19937_64 rng(5);
        double worst = 0.0;
        const int n = 10;
        for (const MasterEquationParams& model :
             {MasterEquationParams{KerrDamped{1.0, 0.5, 0.2, 0.3}}, MasterEquationParams{PhaseInsensitive{0.7}}}) {
          const TwoModeOperator gen = tfd_liouvillian(model, n);
          for (int i = 0; i < 4; ++i) {
            const TruncatedOperator rho = random_density(n, rng);
            worst = std::max(worst, vec_diff(gen.apply(vectorize(rho)), vectorize(lindblad_rhs(model, rho))));
          }
        }
        return make("TFD generator = Lindblad RHS", worst, 1e-12);
      },
      [] {
        const MasterEquationParams model = KerrDamped{1.0, 0.5, 0.2, 0.3};
        double worst = 0.0;
        for (int k = -5; k <= 5; ++k) {
          const SU11NormalForm two =
              compose(disentangle(solution_exponent(model, 0.4).at(k)), disentangle(solution_exponent(model, 0.3).at(k)));
          worst = std::max(worst, nf_diff(two, disentangle(solution_exponent(model, 0.7).at(k))));
        }
        return make("sector semigroup G(s) G(t) = G(s + t)", worst, 1e-12);
      },
      [] {
        const MasterEquationParams model = KerrDamped{1.0, 0.5, 0.2, 0.0};
        const Complex a0(1.0, 0.0);
        IntegratorConfig ic;
        ic.record_times = {0.5};
        const auto snaps = integrate(model, density_matrix(Coherent{a0}, 30), ic);
        const PhaseSpaceGrid probe(3.0, 11);
        const double d = max_abs_diff(evolve_coherent_grid(model, a0, OrderingParameter(0.0), 0.5, probe),
                                      evaluate_grid(snaps[0].rho, OrderingParameter(0.0), probe, "rk4", pointwise()));
        return make("Kerr evolution vs Lindblad oracle", d, 1e-6);
      },
      [] {
        const MasterEquationParams model = PhaseInsensitive{1.0};
        const TruncatedOperator rho0 = density_matrix(NumberDiagonal{{0.0, 1.0}}, 30);
        IntegratorConfig ic;
        ic.record_times = {0.25};
        const auto snaps = integrate(model, rho0, ic);
        const PhaseSpaceGrid probe(3.0, 11);
        const OrderingParameter swept = sweep_order(OrderingParameter(0.0), 1.0, 0.25);
        const double d = max_abs_diff(evaluate_grid(rho0, swept, probe, "one-photon", pointwise()),
                                      evaluate_grid(snaps[0].rho, OrderingParameter(0.0), probe, "rk4", pointwise()));
        return make("sweep law (one photon)", d, 1e-6);
      },
      [] {
        const MasterEquationParams model = KerrDamped{1.0, 0.0, 1.0, 0.0};
        const PhaseSpaceGrid grid(6.0, 61);
        const DistributionField q0 = evaluate_grid(Coherent{1.0}, OrderingParameter(0.0), grid, EvalMethod::ClosedForm);
        const double d = max_abs_diff(phi_evolved_from_field(model, OrderingParameter(0.0), 0.5, q0),
                                      evolve_coherent_grid(model, 1.0, OrderingParameter(0.0), 0.5, grid));
        return make("propagator quadrature vs coherent closed form", d, 1e-6);
      },
  };
}

std::vector<Check> oracle_checks() {
  return {
      [] {
        IntegratorConfig ic;
        ic.record_times = {0.5, 1.0, 2.0};
        const auto snaps = integrate(KerrDamped{1.0, 0.5, 0.2, 0.1}, density_matrix(Coherent{1.0}, 24), ic);
        double worst = 0.0;
        for (const Snapshot& s : snaps) worst = std::max(worst, std::abs(s.rho.trace() - 1.0));
        return make("RK4 trace conservation", worst, 1e-8);
      },
      [] {
        IntegratorConfig ic;
        ic.record_times = {0.5, 1.0, 2.0};
        const auto snaps = integrate(KerrDamped{0.0, 0.0, 1.0, 0.0}, density_matrix(NumberDiagonal{{0.0, 1.0}}, 8), ic);
        double worst = 0.0;
        for (const Snapshot& s : snaps)
          worst = std::max({worst, std::abs(s.rho(1, 1).real() - std::exp(-s.t)),
                            std::abs(s.rho(0, 0).real() - 1.0 + std::exp(-s.t))});
        return make("two-level decay", worst, 1e-8);
      },
      [] {
        IntegratorConfig ic;
        ic.record_times = {16.0};
        const auto snaps = integrate(KerrDamped{1.0, 0.0, 1.0, 0.5}, density_matrix(NumberDiagonal{{1.0}}, 30), ic);
        const double f = 1.0 / 3.0;
        double worst = 0.0;
        for (int n = 0; n < 30; ++n)
          worst = std::max(worst, std::abs(snaps[0].rho(n, n).real() - (1.0 - f) * std::pow(f, n)));
        return make("thermal fixed point", worst, 1e-6);
      },
      [] {
        const MasterEquationParams model = KerrDamped{1.0, 0.3, 0.5, 0.2};
        const int n = 16;
        const TruncatedOperator rho0 = density_matrix(Coherent{{0.5, 0.2}}, n);
        IntegratorConfig ic;
        ic.record_times = {0.5};
        const auto snaps = integrate(model, rho0, ic);
        const CMatrix prop = matrix_exponential(CMatrix(0.5 * tfd_liouvillian(model, n).matrix()));
        const CVector exact = prop * vectorize(rho0).entries();
        return make("RK4 vs exp(t L) on doubled space",
                    (vectorize(snaps[0].rho).entries() - exact).cwiseAbs().maxCoeff(), 1e-7);
      },
      [] {
        const MasterEquationParams model = KerrDamped{0.0, 0.0, 1.0, 0.0};
        const TruncatedOperator rho0 = density_matrix(NumberDiagonal{{0.0, 1.0}}, 8);
        const double t = 4.0;
        auto error = [&](double dt) {
          IntegratorConfig ic;
          ic.dt = dt;
          ic.record_times = {t};
          return std::abs(integrate(model, rho0, ic)[0].rho(1, 1).real() - std::exp(-t));
        };
        const double e1 = error(0.01), e2 = error(0.005);
        const double order = std::log2(e1 / e2);
        std::ostringstream detail;
        detail << "fitted order " << order;
        return make("RK4 convergence order", std::abs(order - 4.0) / 4.0, 0.1, detail.str());
      },
  };
}

std::vector<Check> checks_for(const std::string& suite) {
  if (suite == "fock") return fock_checks();
  if (suite == "algebra") return algebra_checks();
  if (suite == "states") return states_checks();
  if (suite == "distributions") return distributions_checks();
  if (suite == "evolution") return evolution_checks();
  if (suite == "oracle") return oracle_checks();
  fail(ErrorKind::Config, "unknown suite '" + suite + "'");
}

std::vector<CheckResult> run_one(const std::string& suite) {
  std::vector<CheckResult> out;
  for (const Check& check : checks_for(suite)) {
    CheckResult r;
    try {
      r = check();
    } catch (const Error& e) {
      r = {"", "check raised", false, INFINITY, 0.0, std::string(kind_name(e.kind())) + ": " + e.what()};
    }
    r.suite = suite;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"fock", "algebra", "states", "distributions", "evolution", "oracle"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite) {
  if (suite != "all") return run_one(suite);
  std::vector<CheckResult> out;
  for (const std::string& name : suite_names()) {
    std::vector<CheckResult> part = run_one(name);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace phasespace::cli
