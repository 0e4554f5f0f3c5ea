#include "phasespace/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace {

struct Rates {
  std::vector<double> energy;  // H eigenvalues (zero for the diffusion model)
  double down = 0.0;           // coefficient of a rho a^dag
  double up = 0.0;             // coefficient of a^dag rho a
  std::vector<double> left;    // anticommutator diagonal
};

Rates rates(const MasterEquationParams& params, int n) {
  Rates r;
  r.energy.assign(n, 0.0);
  r.left.assign(n, 0.0);
  if (const auto* k = std::get_if<KerrDamped>(&params)) {
    r.down = k->gamma * (k->nbar + 1.0);
    r.up = k->gamma * k->nbar;
    for (int i = 0; i < n; ++i) {
      r.energy[i] = k->omega * i + k->chi * static_cast<double>(i) * i;
      // a a^dag on the truncated space has a zero in its last entry.
      const double aad = i < n - 1 ? i + 1.0 : 0.0;
      r.left[i] = 0.5 * (r.down * i + r.up * aad);
    }
  } else {
    const double kappa = std::get<PhaseInsensitive>(params).kappa;
    r.down = r.up = kappa;
    for (int i = 0; i < n; ++i) r.left[i] = kappa * (i + 0.5);
  }
  return r;
}

void rhs_into(const Rates& r, const CMatrix& rho, CMatrix& out) {
  const int n = static_cast<int>(rho.rows());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Complex v = Complex(0.0, -(r.energy[i] - r.energy[j])) * rho(i, j) - (r.left[i] + r.left[j]) * rho(i, j);
      if (i + 1 < n && j + 1 < n) v += r.down * std::sqrt((i + 1.0) * (j + 1.0)) * rho(i + 1, j + 1);
      if (i > 0 && j > 0) v += r.up * std::sqrt(static_cast<double>(i) * j) * rho(i - 1, j - 1);
      out(i, j) = v;
    }
}

}  // namespace

TruncatedOperator lindblad_rhs(const MasterEquationParams& params, const TruncatedOperator& rho) {
  validate(params);
  CMatrix out(rho.dim(), rho.dim());
  rhs_into(rates(params, rho.dim()), rho.matrix(), out);
  return TruncatedOperator(std::move(out));
}

double stable_step(const MasterEquationParams& params, int cutoff) {
  double scale = 0.0;
  if (const auto* k = std::get_if<KerrDamped>(&params))
    scale = std::max({k->gamma * (k->nbar + 1.0), std::abs(k->omega) + std::abs(k->chi) * 2.0 * cutoff});
  else
    scale = std::get<PhaseInsensitive>(params).kappa;
  return scale > 0.0 ? 0.01 / scale : 0.01;
}

double default_step(const MasterEquationParams& params, int cutoff) {
  const double top = cutoff - 1.0;
  double radius = 0.0;
  if (const auto* k = std::get_if<KerrDamped>(&params))
    radius = std::abs(k->omega) * top + std::abs(k->chi) * top * top + k->gamma * (2.0 * k->nbar + 1.0) * cutoff;
  else
    radius = 2.0 * std::get<PhaseInsensitive>(params).kappa * cutoff;
  const double bound = stable_step(params, cutoff);
  return radius > 0.0 ? std::min(bound, 0.1 / radius) : bound;
}

std::vector<Snapshot> integrate(const MasterEquationParams& params, const TruncatedOperator& rho0,
                                const IntegratorConfig& config) {
  validate(params);
  require_density(rho0);
  const int n = rho0.dim();
  const double bound = stable_step(params, n);
  const double dt = config.dt > 0.0 ? config.dt : default_step(params, n);
  if (dt > bound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the stability bound " << bound;
    fail(ErrorKind::Stability, msg.str());
  }
  require(std::is_sorted(config.record_times.begin(), config.record_times.end()) &&
              (config.record_times.empty() || config.record_times.front() >= 0.0),
          ErrorKind::InvalidArgument, "record times must be sorted and nonnegative");

  const Rates r = rates(params, n);
  CMatrix rho = rho0.matrix();
  CMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
  double now = 0.0;
  std::vector<Snapshot> out;
  out.reserve(config.record_times.size());
  for (double target : config.record_times) {
    const double span = target - now;
    const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / dt - 1e-9)) : 0;
    const double h = steps > 0 ? span / steps : 0.0;
    for (long s = 0; s < steps; ++s) {
      rhs_into(r, rho, k1);
      tmp = rho + (0.5 * h) * k1;
      rhs_into(r, tmp, k2);
      tmp = rho + (0.5 * h) * k2;
      rhs_into(r, tmp, k3);
      tmp = rho + h * k3;
      rhs_into(r, tmp, k4);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    now = target;
    TruncatedOperator snap(rho);
    const double drift = std::abs(snap.trace() - 1.0);
    if (drift > 1e-8) {
      std::ostringstream msg;
      msg << "trace drifted by " << drift << " at t = " << target;
      fail(ErrorKind::TraceDrift, msg.str());
    }
    const double low = min_eigenvalue(snap);
    if (low < -1e-8) {
      std::ostringstream msg;
      msg << "minimum eigenvalue " << low << " at t = " << target;
      fail(ErrorKind::Stability, msg.str());
    }
    out.push_back({target, std::move(snap)});
  }
  return out;
}

Moments moments(const TruncatedOperator& rho) {
  const int n = rho.dim();
  const auto [a, ad] = ladder_operators(n);
  Moments m;
  m.trace = rho.trace().real();
  m.purity = (rho.matrix() * rho.matrix()).trace().real();
  m.mean_a = (a.matrix() * rho.matrix()).trace();
  for (int i = 0; i < n; ++i) m.mean_n += i * rho(i, i).real();
  m.min_eigenvalue = min_eigenvalue(rho);
  return m;
}

}  // namespace phasespace
