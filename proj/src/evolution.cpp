#include "phasespace/evolution.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr int kSectorCap = 600;
constexpr int kInnerCap = 4000;
constexpr double kInvPi = 1.0 / std::numbers::pi;

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

struct Sector {
  bool ok = false;
  Complex plus_m1;   // Gamma+ - 1
  Complex minus_m1;  // Gamma- - 1
  Complex log_s;
  Complex s;
  double det_scale = 0.0;
};

// Sum over K0 sectors of normal-form Gaussians; see the header of evolution.hpp.
class SectorSum {
 public:
  SectorSum(const SectorExponent& e, double left_w, double right_w)
      : exponent_(e), left_(ordering_matrix(left_w)), right_(ordering_matrix(right_w)),
        linear_(e.k3_per_k == Complex(0.0, 0.0)), k0_(e.base.k0), scalar_(e.base.scalar),
        table_(linear_ ? 1 : 2 * kSectorCap + 1) {}

  bool linear() const { return linear_; }

  const Sector& sector(int k) const {
    const std::size_t slot = linear_ ? 0 : static_cast<std::size_t>(k + kSectorCap);
    std::optional<Sector>& cached = table_[slot];
    if (!cached) cached = build(linear_ ? 0 : k);
    if (!cached->ok) {
      std::ostringstream msg;
      msg << "normal form of the evolved sandwich is singular on sector k = " << k << " (|D| = "
          << cached->det_scale << ")";
      fail(ErrorKind::Singular, msg.str());
    }
    return *cached;
  }

  Complex k0() const { return k0_; }
  Complex scalar() const { return scalar_; }

  double operator()(Complex alpha, Complex beta) const {
    return linear_ ? linear_value(alpha, beta) : series_value(alpha, beta);
  }

  // Prepare every sector up front so the table is read-only during parallel use.
  void warm(int kmax) const {
    if (linear_) {
      sector(0);
      return;
    }
    for (int k = -kmax; k <= kmax; ++k) {
      std::optional<Sector>& cached = table_[static_cast<std::size_t>(k + kSectorCap)];
      if (!cached) cached = build(k);
    }
  }

 private:
  Sector build(int k) const {
    const Mat2 m = left_ * exponentiate(exponent_.at(k)) * right_;
    Sector out;
    const Complex d = m(1, 1);
    out.det_scale = std::abs(d);
    if (!(std::abs(d) > 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff()))) return out;
    out.ok = true;
    out.plus_m1 = m(0, 1) / d - 1.0;
    out.minus_m1 = -m(1, 0) / d - 1.0;
    out.s = 1.0 / d;
    out.log_s = -std::log(d);
    return out;
  }

  double linear_value(Complex alpha, Complex beta) const {
    const Sector& sec = sector(0);
    const Complex x = std::conj(alpha) * beta;
    const Complex e = sec.plus_m1 * std::norm(alpha) + sec.minus_m1 * std::norm(beta) + sec.log_s + scalar_ +
                      sec.s * (std::exp(k0_) * x + std::exp(-k0_) * std::conj(x));
    return std::exp(e).real() * kInvPi;
  }

  double series_value(Complex alpha, Complex beta) const {
    const double aa = std::norm(alpha), bb = std::norm(beta);
    const Complex x = std::conj(alpha) * beta;
    const Complex y = std::conj(x);
    Complex total = 0.0;
    for (int dir : {1, -1}) {
      const Complex w = dir > 0 ? x : y;
      const Complex log_w = w == Complex(0.0, 0.0) ? Complex(0.0, 0.0) : std::log(w);
      double peak = 0.0;
      int quiet = 0;
      for (int j = dir > 0 ? 0 : 1;; ++j) {
        if (j > 0 && w == Complex(0.0, 0.0)) break;
        if (j >= kSectorCap) {
          std::ostringstream msg;
          msg << "sector sum not converged after " << kSectorCap << " terms at alpha = " << alpha;
          fail(ErrorKind::TailBound, msg.str());
        }
        const int k = dir * j;
        const Sector& sec = sector(k);
        const Complex inner = bessel_series(sec.s * sec.s * (aa * bb), j);
        if (inner == Complex(0.0, 0.0)) continue;
        const Complex log_term = static_cast<double>(k) * k0_ + sec.plus_m1 * aa + sec.minus_m1 * bb +
                                 static_cast<double>(j + 1) * sec.log_s + static_cast<double>(j) * log_w -
                                 std::lgamma(j + 1.0) + std::log(inner) + scalar_;
        const double mag = std::exp(log_term.real());
        total += std::exp(log_term);
        peak = std::max(peak, mag);
        const bool past_peak = j > std::abs(sec.s * w) + 5.0;
        quiet = (past_peak && mag <= 1e-18 * peak) ? quiet + 1 : 0;
        if (quiet >= 3 || (past_peak && peak == 0.0)) break;
      }
    }
    return total.real() * kInvPi;
  }

  // sum_n z^n j! / (n! (n+j)!)
  static Complex bessel_series(Complex z, int j) {
    Complex term = 1.0, sum = 1.0;
    const double mz = std::abs(z);
    for (int n = 0; n < kInnerCap; ++n) {
      term *= z / ((n + 1.0) * (n + 1.0 + j));
      sum += term;
      if ((n + 1.0) * (n + 1.0 + j) > 2.0 * mz && std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
    }
    fail(ErrorKind::TailBound, "sector series did not converge");
  }

  SectorExponent exponent_;
  Mat2 left_, right_;
  bool linear_;
  Complex k0_, scalar_;
  mutable std::vector<std::optional<Sector>> table_;
};

void require_time(double t) {
  require(std::isfinite(t) && t >= 0.0, ErrorKind::InvalidArgument, "time must be finite and >= 0");
}

void require_order(const OrderingParameter& a) {
  if (a.is_p_limit()) fail(ErrorKind::SingularOrder, "evolution at a = 1 has no pointwise value");
}

constexpr int kDecayCheckSectors = 60;

// The propagator is a function of (alpha, beta) only if every sector Gaussian decays.
void require_decaying_kernel(const SectorSum& sum, const OrderingParameter& a, double t) {
  const int reach = sum.linear() ? 0 : kDecayCheckSectors;
  for (int k = -reach; k <= reach; ++k) {
    const Sector& sec = sum.sector(k);
    if (sec.plus_m1.real() < 0.0 && sec.minus_m1.real() < 0.0) continue;
    std::ostringstream msg;
    msg << "propagator for a = " << a.value() << " at t = " << t << " does not decay on sector k = " << k
        << "; use a larger ordering parameter";
    fail(ErrorKind::Unsupported, msg.str());
  }
}

}  // namespace

void validate(const MasterEquationParams& params) {
  std::visit(overloaded{
                 [](const KerrDamped& p) {
                   require(std::isfinite(p.omega) && std::isfinite(p.chi), ErrorKind::InvalidArgument,
                           "omega and chi must be finite");
                   require(finite_nonneg(p.gamma) && finite_nonneg(p.nbar), ErrorKind::InvalidArgument,
                           "gamma and nbar must be >= 0");
                 },
                 [](const PhaseInsensitive& p) {
                   require(finite_nonneg(p.kappa), ErrorKind::InvalidArgument, "kappa must be >= 0");
                 },
             },
             params);
}

std::string describe(const MasterEquationParams& params) {
  auto num = [](double x) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, x).ptr);
  };
  std::ostringstream s;
  std::visit(overloaded{
                 [&](const KerrDamped& p) {
                   s << "kerr-damped(omega=" << num(p.omega) << ", chi=" << num(p.chi) << ", gamma=" << num(p.gamma)
                     << ", nbar=" << num(p.nbar) << ")";
                 },
                 [&](const PhaseInsensitive& p) { s << "phase-insensitive(kappa=" << num(p.kappa) << ")"; },
             },
             params);
  return s.str();
}

bool is_linear(const MasterEquationParams& params) {
  const auto* kerr = std::get_if<KerrDamped>(&params);
  return kerr == nullptr || kerr->chi == 0.0;
}

TwoModeOperator tfd_liouvillian(const MasterEquationParams& params, int cutoff) {
  require(cutoff >= 4, ErrorKind::InvalidArgument, "tfd_liouvillian needs cutoff >= 4");
  validate(params);
  const auto [a, ad] = ladder_operators(cutoff);
  const TruncatedOperator n = ad * a;
  const TruncatedOperator nn = a * ad;
  const TwoModeOperator k_minus = lift(a) * tilde_lift(a);
  const TwoModeOperator k_plus = lift(ad) * tilde_lift(ad);
  return std::visit(
      overloaded{
          [&](const KerrDamped& p) {
            const TruncatedOperator h = Complex(p.omega) * n + Complex(p.chi) * (n * n);
            TwoModeOperator gen = Complex(0.0, -1.0) * (lift(h) - tilde_lift(h));
            if (p.gamma > 0.0) {
              const double down = p.gamma * (p.nbar + 1.0), up = p.gamma * p.nbar;
              gen = gen + Complex(down) * (k_minus - Complex(0.5) * (lift(n) + tilde_lift(n)));
              gen = gen + Complex(up) * (k_plus - Complex(0.5) * (lift(nn) + tilde_lift(nn)));
            }
            return gen;
          },
          [&](const PhaseInsensitive& p) {
            const TruncatedOperator half = Complex(0.5) * TruncatedOperator::identity(cutoff);
            return Complex(p.kappa) * (k_plus + k_minus - lift(n + half) - tilde_lift(n + half));
          },
      },
      params);
}

SU11Exponent SectorExponent::at(int k) const {
  SU11Exponent e = base;
  e.k3 += k3_per_k * static_cast<double>(k);
  return e;
}

SectorExponent solution_exponent(const MasterEquationParams& params, double t) {
  require_time(t);
  validate(params);
  SectorExponent out;
  std::visit(overloaded{
                 [&](const KerrDamped& p) {
                   out.base.plus = p.gamma * p.nbar * t;
                   out.base.minus = p.gamma * (p.nbar + 1.0) * t;
                   out.base.k3 = -p.gamma * (2.0 * p.nbar + 1.0) * t;
                   out.base.k0 = Complex(0.0, -(p.omega - p.chi) * t);
                   out.base.scalar = 0.5 * p.gamma * t;
                   out.k3_per_k = Complex(0.0, -2.0 * p.chi * t);
                 },
                 [&](const PhaseInsensitive& p) {
                   out.base.plus = p.kappa * t;
                   out.base.minus = p.kappa * t;
                   out.base.k3 = -2.0 * p.kappa * t;
                 },
             },
             params);
  return out;
}

double phi_evolved_coherent(const MasterEquationParams& params, Complex alpha0, const OrderingParameter& a, double t,
                            Complex alpha) {
  require_order(a);
  return SectorSum(solution_exponent(params, t), a.value(), 0.0)(alpha, alpha0);
}

double propagator_kernel(const MasterEquationParams& params, const OrderingParameter& a, double t, Complex alpha,
                         Complex alpha0) {
  require_order(a);
  return SectorSum(solution_exponent(params, t), a.value(), 1.0 - a.value())(alpha, alpha0);
}

DistributionField evolve_coherent_grid(const MasterEquationParams& params, Complex alpha0,
                                       const OrderingParameter& a, double t, const PhaseSpaceGrid& grid,
                                       Execution execution) {
  require_order(a);
  const SectorSum sum(solution_exponent(params, t), a.value(), 0.0);
  sum.warm(kSectorCap);
  std::vector<double> values =
      map_indices<double>(execution, grid.size(), [&](std::size_t i) { return sum(grid.point(i), alpha0); });
  std::ostringstream source;
  source << describe(StateSpec{Coherent{alpha0}}) << " under " << describe(params);
  return DistributionField{grid, std::move(values), a, {source.str(), t, Method::Evolved}, 0.0,
                           a.certified(), 0.0};
}

DistributionField phi_evolved_from_field(const MasterEquationParams& params, const OrderingParameter& a, double t,
                                         const DistributionField& initial, Execution execution) {
  require_order(a);
  require(initial.order.value() == a.value(), ErrorKind::OrderMismatch,
          "initial field order differs from the requested order");
  DistributionField out = initial;
  out.provenance.method = Method::Evolved;
  out.provenance.time = initial.provenance.time + t;
  out.provenance.source = initial.provenance.source + " under " + describe(params);
  if (t == 0.0) return out;

  const SectorSum sum(solution_exponent(params, t), a.value(), 1.0 - a.value());
  sum.warm(kSectorCap);
  require_decaying_kernel(sum, a, t);
  const PhaseSpaceGrid& grid = initial.grid;
  std::vector<std::size_t> active;
  std::vector<double> mass;
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (initial.values[j] != 0.0) {
      active.push_back(j);
      mass.push_back(grid.weight(j) * initial.values[j]);
    }

  if (sum.linear()) {
    const Sector& sec = sum.sector(0);
    const Complex c = sec.s * std::exp(sum.k0());
    const Complex c_bar = sec.s * std::exp(-sum.k0());
    const Complex shift = sec.log_s + sum.scalar();
    const bool real_kernel = std::abs(sec.plus_m1.imag()) < 1e-14 && std::abs(sec.minus_m1.imag()) < 1e-14 &&
                             std::abs(shift.imag()) < 1e-14 && std::abs(c_bar - std::conj(c)) < 1e-14;
    std::vector<Complex> beta(active.size());
    std::vector<Complex> beta_term(active.size());
    for (std::size_t n = 0; n < active.size(); ++n) {
      beta[n] = grid.point(active[n]);
      beta_term[n] = sec.minus_m1 * std::norm(beta[n]) + shift;
    }
    out.values = map_indices<double>(execution, grid.size(), [&](std::size_t i) {
      const Complex alpha = grid.point(i);
      const Complex alpha_term = sec.plus_m1 * std::norm(alpha);
      double acc = 0.0;
      if (real_kernel) {
        const double base = alpha_term.real();
        const Complex ca = 2.0 * std::conj(alpha) * c;
        for (std::size_t n = 0; n < active.size(); ++n) {
          const double e = base + beta_term[n].real() + (ca * beta[n]).real();
          if (e > -745.0) acc += mass[n] * std::exp(e);
        }
      } else {
        for (std::size_t n = 0; n < active.size(); ++n) {
          const Complex x = std::conj(alpha) * beta[n];
          acc += mass[n] * std::exp(alpha_term + beta_term[n] + c * x + c_bar * std::conj(x)).real();
        }
      }
      return acc * kInvPi;
    });
    return out;
  }

  out.values = map_indices<double>(execution, grid.size(), [&](std::size_t i) {
    const Complex alpha = grid.point(i);
    double acc = 0.0;
    for (std::size_t n = 0; n < active.size(); ++n) acc += mass[n] * sum(alpha, grid.point(active[n]));
    return acc;
  });
  return out;
}

double kernel_action(const MasterEquationParams& params, const OrderingParameter& a, double t, Complex alpha,
                     const std::function<double(Complex)>& phi0, double radius, int points) {
  require_order(a);
  const SectorSum sum(solution_exponent(params, t), a.value(), 1.0 - a.value());
  require_decaying_kernel(sum, a, t);
  const PhaseSpaceGrid local(radius, points);
  double acc = 0.0;
  for (std::size_t j = 0; j < local.size(); ++j) {
    const Complex beta = alpha + local.point(j);
    acc += local.weight(j) * sum(alpha, beta) * phi0(beta);
  }
  return acc;
}

OrderingParameter sweep_order(const OrderingParameter& a, double kappa, double t) {
  require_time(t);
  require(finite_nonneg(kappa), ErrorKind::InvalidArgument, "kappa must be >= 0");
  return OrderingParameter(a.value() - kappa * t);
}

}  // namespace phasespace
