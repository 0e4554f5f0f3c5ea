#pragma once

#include <string>
#include <variant>
#include <vector>

#include "phasespace/fock.hpp"
#include "phasespace/su11.hpp"

namespace phasespace {

struct Coherent {
  Complex alpha0{};
};

/// f = exp(-beta) = nbar/(1+nbar), f in [0,1).
struct ThermalCoherent {
  Complex alpha0{};
  double f = 0.0;
};

/// D(alpha0) S(z) rho_thermal(f) S^dag(z) D^dag(alpha0), z = r e^{i theta}.
struct SqueezedThermalCoherent {
  Complex alpha0{};
  Complex z{};
  double f = 0.0;
};

/// Diagonal in the number basis with populations p.
struct NumberDiagonal {
  std::vector<double> p;
};

using StateSpec = std::variant<Coherent, ThermalCoherent, SqueezedThermalCoherent, NumberDiagonal>;

inline constexpr double kMaxSqueeze = 1.5;

/// Throws InvalidArgument when the spec violates its invariants.
void validate(const StateSpec& spec);

/// Canonical one-line text form, e.g. "thermal-coherent(alpha0=1+0.5i, f=0.3)".
std::string describe(const StateSpec& spec);

/// Displacement alpha0 of the spec (zero for NumberDiagonal).
Complex center(const StateSpec& spec);

/// The same state displaced by beta. NumberDiagonal is not closed under
/// displacement and throws Unsupported.
StateSpec shifted(const StateSpec& spec, Complex beta);

/// Rough phase-space radius outside which every order a <= 1/2 is negligible.
double support_radius(const StateSpec& spec);

bool has_closed_form(const StateSpec& spec);

/// Truncated density matrix. Built on a padded basis and cropped; throws
/// Truncation if the population at n >= N - 5 exceeds 1e-10.
TruncatedOperator density_matrix(const StateSpec& spec, int cutoff = kDefaultCutoff);

/// Thermal state as exp(nbar (K+ + K- - 2K3)) |0,0>.
SU11Exponent thermal_tfd_exponent(double nbar);

/// The a = 1 distribution of a coherent state, delta^2(alpha - center).
struct DeltaDescriptor {
  Complex center;
};

using PhiSample = std::variant<double, DeltaDescriptor>;

/// Closed-form Phi^(a)(alpha). For a = 1 only Coherent is accepted and the
/// result is a DeltaDescriptor; other specs throw SingularOrder.
PhiSample closed_form_sample(const StateSpec& spec, const OrderingParameter& a, Complex alpha);

/// Pointwise value; throws SingularOrder at a = 1, OutOfFamily when the
/// squeezed Gaussian is not normalizable at this order, Unsupported for
/// NumberDiagonal.
double closed_form_phi(const StateSpec& spec, const OrderingParameter& a, Complex alpha);

}  // namespace phasespace
