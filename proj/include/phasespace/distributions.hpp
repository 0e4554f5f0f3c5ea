#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "phasespace/fock.hpp"
#include "phasespace/grid.hpp"
#include "phasespace/parallel.hpp"
#include "phasespace/states.hpp"
#include "phasespace/su11.hpp"

namespace phasespace {

enum class Method { ClosedForm, Oracle, Evolved, Convolved };

std::string_view method_name(Method m);

struct Provenance {
  std::string source;
  double time = 0.0;
  Method method = Method::ClosedForm;
};

/// Sampled Phi^(a) on a grid.
struct DistributionField {
  PhaseSpaceGrid grid;
  std::vector<double> values;
  OrderingParameter order;
  Provenance provenance;
  double max_imag_residue = 0.0;
  /// False when any sample came from the oracle at a > 1/2.
  bool certified = true;
  /// Phase-space radius of the sampled state, 0 when unknown.
  double support = 0.0;
};

struct OracleSample {
  double value = 0.0;
  double imag_residue = 0.0;
};

/// Evaluates (1-lambda)/pi sum_n lambda^n <n|D^dag(alpha) rho D(alpha)|n> with
/// exact displacement matrix elements. Construction trims rho to its numerical
/// support and, for the spectral variant, to the eigenvectors of its hermitian
/// part above 1e-16 of the largest weight. Sampling is const and safe to call
/// concurrently.
///
/// Direct: p_n = sum_jk conj(D_jn) rho_jk D_kn, imaginary residue measured.
/// Spectral: p_n = sum_i w_i |<psi_i|D|n>|^2, residue bounded by the
/// anti-hermitian part of rho.
class DensityOracle {
 public:
  enum class Variant { Direct, Spectral };

  DensityOracle(const TruncatedOperator& rho, const OrderingParameter& a, Variant variant = Variant::Spectral);

  OracleSample sample(Complex alpha) const;
  double operator()(Complex alpha) const { return sample(alpha).value; }

  /// Number of sum terms used at alpha.
  int terms(Complex alpha) const;
  int support() const { return static_cast<int>(rho_.rows()); }
  bool certified() const { return certified_; }

 private:
  CMatrix rho_;
  CMatrix vectors_;        // columns sqrt(|w_i|) psi_i
  Eigen::VectorXd signs_;  // sign of w_i
  double anti_hermitian_ = 0.0;
  double lambda_;
  bool certified_;
  Variant variant_;
};

/// Single-point generating-function evaluation.
double phi_from_density(const TruncatedOperator& rho, const OrderingParameter& a, Complex alpha);

/// D(alpha) rho0 D^dag(alpha), rho0 = (1 - lambda) lambda^{a^dag a}.
TruncatedOperator delta_operator(const OrderingParameter& a, Complex alpha, int cutoff = kDefaultCutoff);

enum class EvalMethod { ClosedForm, Oracle };

std::string_view eval_method_name(EvalMethod m);

struct EvalOptions {
  Execution execution = Execution::Parallel;
  int cutoff = kDefaultCutoff;
  /// Require L >= |alpha0| + 4. Pointwise comparisons on small windows turn
  /// this off; integrals need it.
  bool enforce_coverage = true;
};

DistributionField evaluate_grid(const StateSpec& spec, const OrderingParameter& a, const PhaseSpaceGrid& grid,
                                EvalMethod method, const EvalOptions& options = {});

/// Oracle evaluation of an explicit density matrix.
DistributionField evaluate_grid(const TruncatedOperator& rho, const OrderingParameter& a,
                                const PhaseSpaceGrid& grid, const std::string& source,
                                const EvalOptions& options = {});

/// Gaussian smoothing Phi^(a) -> Phi^(a-b), b > 0.
DistributionField convolve_to_lower_order(const DistributionField& field, double b,
                                          Execution execution = Execution::Parallel);

struct OrderCheckReport {
  double delta = 0.0;           // a - b
  double max_residual = 0.0;    // max |Phi^(a) - [Phi^(b) - delta d2 Phi^(b)]|
  double second_order = 0.0;    // max |delta^2/2 d2^2 Phi^(b)|
  double coefficient = 0.0;     // max_residual / delta^2
  bool passed = false;
};

/// First-order check of Phi^(a) = exp[-(a-b) d^2/dalpha dalpha*] Phi^(b)
/// with fourth-order central differences on the interior of the grid.
OrderCheckReport differential_order_check(const DistributionField& field_b, const DistributionField& field_a);

struct IntegralReport {
  double value = 0.0;
  bool covered = true;
  std::string warning;
};

/// Trapezoid integral; covered is false when the boundary still carries
/// more than 1e-6 of the peak magnitude.
IntegralReport integrate_checked(const DistributionField& field);
double integrate(const DistributionField& field);

/// pi * integral of Phi_rho^(a) Phi_A^(1-a).
double overlap_trace(const DistributionField& field_rho, const DistributionField& field_op);

/// Integral of alpha Phi(alpha).
Complex field_mean(const DistributionField& field);

/// Max pointwise |x - y| on a common grid.
double max_abs_diff(const DistributionField& x, const DistributionField& y);

}  // namespace phasespace
