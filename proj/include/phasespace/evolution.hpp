#pragma once

// Closed-form evolution of Phi^(a) under
//   Kerr:  H = omega a^dag a + chi (a^dag a)^2 with thermal damping (gamma, nbar)
//   phase-insensitive diffusion with rate kappa.
//
// Both generators are su(1,1) elements once K0 is fixed to its eigenvalue k
// on a sector, so every quantity below reduces to a sum over sectors of
// normal-form coefficients obtained from 2x2 products
//   M(k) = E(a) G_t(k) E(b),  E(w) = exp(-w (K+ + K- - 2K3)),
// with b = 0 for a coherent initial state and b = 1 - a for the propagator.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "phasespace/distributions.hpp"
#include "phasespace/fock.hpp"
#include "phasespace/su11.hpp"

namespace phasespace {

struct KerrDamped {
  double omega = 0.0;
  double chi = 0.0;
  double gamma = 0.0;
  double nbar = 0.0;
};

struct PhaseInsensitive {
  double kappa = 0.0;
};

using MasterEquationParams = std::variant<KerrDamped, PhaseInsensitive>;

void validate(const MasterEquationParams& params);
std::string describe(const MasterEquationParams& params);

/// True when the generator has no K0-dependent K3 coefficient (chi = 0).
bool is_linear(const MasterEquationParams& params);

/// Doubled-space generator built from lifted and tilde operators. Equals the
/// vectorized Lindblad right-hand side under the n*N + m pairing.
TwoModeOperator tfd_liouvillian(const MasterEquationParams& params, int cutoff);

/// Solution exponent with K3 coefficient k3 + k3_per_k * k on the sector K0 = k.
struct SectorExponent {
  SU11Exponent base;
  Complex k3_per_k{};

  SU11Exponent at(int k) const;
};

SectorExponent solution_exponent(const MasterEquationParams& params, double t);

/// Phi^(a) at time t for the initial coherent state |alpha0>.
double phi_evolved_coherent(const MasterEquationParams& params, Complex alpha0, const OrderingParameter& a, double t,
                            Complex alpha);

/// K^(a)(alpha, t; alpha0, 0), so that Phi_t(alpha) = int K Phi_0(alpha0) d^2 alpha0.
double propagator_kernel(const MasterEquationParams& params, const OrderingParameter& a, double t, Complex alpha,
                         Complex alpha0);

/// Grid of phi_evolved_coherent values.
DistributionField evolve_coherent_grid(const MasterEquationParams& params, Complex alpha0,
                                       const OrderingParameter& a, double t, const PhaseSpaceGrid& grid,
                                       Execution execution = Execution::Parallel);

/// Trapezoid quadrature of the propagator against a sampled initial field.
/// Returns a copy of the initial field at t = 0. Throws Unsupported when the
/// propagator at this order is not a decaying Gaussian on some sector (small a
/// under Kerr dynamics).
DistributionField phi_evolved_from_field(const MasterEquationParams& params, const OrderingParameter& a, double t,
                                         const DistributionField& initial,
                                         Execution execution = Execution::Parallel);

/// int K(alpha, t; beta) phi0(beta) d^2 beta over the square of half-width
/// radius centred on alpha, sampled with `points` per axis.
double kernel_action(const MasterEquationParams& params, const OrderingParameter& a, double t, Complex alpha,
                     const std::function<double(Complex)>& phi0, double radius, int points);

/// a - kappa t.
OrderingParameter sweep_order(const OrderingParameter& a, double kappa, double t);

}  // namespace phasespace
