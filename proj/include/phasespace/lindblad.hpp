#pragma once

#include <vector>

#include "phasespace/evolution.hpp"
#include "phasespace/fock.hpp"

namespace phasespace {

struct IntegratorConfig {
  /// Largest step; 0 selects default_step for the model.
  double dt = 0.0;
  /// Sorted, nonnegative. The integrator lands exactly on each.
  std::vector<double> record_times;
};

struct Snapshot {
  double t = 0.0;
  TruncatedOperator rho;
};

/// Right-hand side of the master equation, elementwise in O(N^2).
TruncatedOperator lindblad_rhs(const MasterEquationParams& params, const TruncatedOperator& rho);

/// 0.01 / max(gamma (nbar+1), kappa, |omega| + 2 N |chi|).
double stable_step(const MasterEquationParams& params, int cutoff);

/// min(stable_step, 0.1 / r) with r = |omega|(N-1) + |chi|(N-1)^2 +
/// gamma(2 nbar + 1) N + 2 kappa N, a bound on the generator's spectral radius.
/// Keeps the RK4 amplitude error on the fastest coherences below 1e-9.
double default_step(const MasterEquationParams& params, int cutoff);

/// Fixed-step RK4. Each snapshot is checked for |Tr rho - 1| <= 1e-8
/// (TraceDrift) and min eigenvalue >= -1e-8 (Stability).
std::vector<Snapshot> integrate(const MasterEquationParams& params, const TruncatedOperator& rho0,
                                const IntegratorConfig& config);

struct Moments {
  double trace = 0.0;
  double purity = 0.0;
  Complex mean_a;
  double mean_n = 0.0;
  double min_eigenvalue = 0.0;
};

Moments moments(const TruncatedOperator& rho);

}  // namespace phasespace
