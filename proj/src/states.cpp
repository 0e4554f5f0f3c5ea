#include "phasespace/states.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_f(double f) {
  require(std::isfinite(f) && f >= 0.0 && f < 1.0, ErrorKind::InvalidArgument,
          "thermal parameter f must lie in [0,1)");
}

// Shortest text that reads back to the same double.
std::string format_real(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_complex(Complex c) {
  return format_real(c.real()) + (std::signbit(c.imag()) ? "-" : "+") + format_real(std::abs(c.imag())) + "i";
}

CMatrix thermal_diagonal(double f, int dim) {
  CMatrix rho = CMatrix::Zero(dim, dim);
  double p = 1.0 - f;
  for (int n = 0; n < dim; ++n, p *= f) rho(n, n) = p;
  return rho;
}

// D rho D^dag with exact displacement elements; rho is padded so its tail
// is negligible.
CMatrix displace(const CMatrix& rho, Complex alpha) {
  if (alpha == Complex(0.0, 0.0)) return rho;
  const CMatrix d = displacement_elements(alpha, static_cast<int>(rho.rows()), static_cast<int>(rho.rows()));
  return d * rho * d.adjoint();
}

TruncatedOperator crop(const CMatrix& padded, int cutoff) {
  double tail = 0.0;
  for (Eigen::Index n = cutoff - 5; n < padded.rows(); ++n) tail += padded(n, n).real();
  if (tail > 1e-10) {
    std::ostringstream msg;
    msg << "population above n = " << cutoff - 5 << " is " << tail << " (> 1e-10); raise the cutoff";
    fail(ErrorKind::Truncation, msg.str());
  }
  CMatrix rho = padded.topLeftCorner(cutoff, cutoff);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return TruncatedOperator(std::move(rho));
}

double squeezed_gaussian(Complex delta, double lambda, Complex z, double f) {
  const double r = std::abs(z);
  const double theta = std::arg(z);
  const double t = std::tanh(r);
  const double den = (1.0 - lambda * f) * (1.0 - lambda * f) - (lambda - f) * (lambda - f) * t * t;
  const double quad = (1.0 - lambda * f) - (lambda - f) * t * t;
  const double cross = 0.5 * (1.0 + f) * (1.0 - lambda) * t;
  if (!(den > 0.0) || !(quad > 2.0 * std::abs(cross))) {
    std::ostringstream msg;
    msg << "squeezed Gaussian not normalizable at lambda = " << lambda << " (denominator " << den << ")";
    fail(ErrorKind::OutOfFamily, msg.str());
  }
  const Complex rot = std::polar(1.0, -theta);
  const double x = quad * std::norm(delta) + cross * 2.0 * (delta * delta * rot).real();
  const double pref = (1.0 - f) * (1.0 - lambda) / (std::cosh(r) * std::numbers::pi * std::sqrt(den));
  return pref * std::exp(-(1.0 - f) * (1.0 - lambda) * x / den);
}

}  // namespace

void validate(const StateSpec& spec) {
  std::visit(overloaded{
                 [](const Coherent& s) {
                   require(std::isfinite(std::abs(s.alpha0)), ErrorKind::InvalidArgument, "alpha0 not finite");
                 },
                 [](const ThermalCoherent& s) {
                   require(std::isfinite(std::abs(s.alpha0)), ErrorKind::InvalidArgument, "alpha0 not finite");
                   check_f(s.f);
                 },
                 [](const SqueezedThermalCoherent& s) {
                   require(std::isfinite(std::abs(s.alpha0)), ErrorKind::InvalidArgument, "alpha0 not finite");
                   check_f(s.f);
                   require(std::abs(s.z) <= kMaxSqueeze, ErrorKind::InvalidArgument,
                           "squeeze magnitude |z| must be <= 1.5");
                 },
                 [](const NumberDiagonal& s) {
                   require(!s.p.empty(), ErrorKind::InvalidArgument, "empty population vector");
                   double sum = 0.0;
                   for (double p : s.p) {
                     require(std::isfinite(p) && p >= 0.0, ErrorKind::InvalidArgument,
                             "populations must be nonnegative");
                     sum += p;
                   }
                   require(std::abs(sum - 1.0) <= 1e-12, ErrorKind::InvalidArgument,
                           "populations must sum to 1");
                 },
             },
             spec);
}

std::string describe(const StateSpec& spec) {
  std::ostringstream s;
  std::visit(overloaded{
                 [&](const Coherent& c) { s << "coherent(alpha0=" << format_complex(c.alpha0) << ")"; },
                 [&](const ThermalCoherent& c) {
                   s << "thermal-coherent(alpha0=" << format_complex(c.alpha0) << ", f=" << format_real(c.f) << ")";
                 },
                 [&](const SqueezedThermalCoherent& c) {
                   s << "squeezed-thermal-coherent(alpha0=" << format_complex(c.alpha0)
                     << ", z=" << format_complex(c.z) << ", f=" << format_real(c.f) << ")";
                 },
                 [&](const NumberDiagonal& c) {
                   s << "number-diagonal(p=[";
                   for (std::size_t i = 0; i < c.p.size(); ++i) s << (i ? ", " : "") << format_real(c.p[i]);
                   s << "])";
                 },
             },
             spec);
  return s.str();
}

Complex center(const StateSpec& spec) {
  return std::visit(overloaded{
                        [](const NumberDiagonal&) { return Complex{}; },
                        [](const auto& s) { return s.alpha0; },
                    },
                    spec);
}

StateSpec shifted(const StateSpec& spec, Complex beta) {
  return std::visit(overloaded{
                        [](const NumberDiagonal&) -> StateSpec {
                          fail(ErrorKind::Unsupported, "number-diagonal states are not closed under displacement");
                        },
                        [&](auto s) -> StateSpec {
                          s.alpha0 += beta;
                          return s;
                        },
                    },
                    spec);
}

double support_radius(const StateSpec& spec) {
  return std::visit(overloaded{
                        [](const Coherent& s) { return std::abs(s.alpha0) + 4.0; },
                        [](const ThermalCoherent& s) {
                          return std::abs(s.alpha0) + 4.0 * std::sqrt(0.5 * ((1.0 + s.f) / (1.0 - s.f) + 1.0));
                        },
                        [](const SqueezedThermalCoherent& s) {
                          const double wide = (1.0 + s.f) / (1.0 - s.f) * std::exp(2.0 * std::abs(s.z));
                          return std::abs(s.alpha0) + 4.0 * std::sqrt(0.5 * (wide + 1.0));
                        },
                        [](const NumberDiagonal& s) {
                          std::size_t top = 0;
                          for (std::size_t n = 0; n < s.p.size(); ++n)
                            if (s.p[n] > 0.0) top = n;
                          return std::sqrt(static_cast<double>(top)) + 4.0;
                        },
                    },
                    spec);
}

bool has_closed_form(const StateSpec& spec) { return !std::holds_alternative<NumberDiagonal>(spec); }

TruncatedOperator density_matrix(const StateSpec& spec, int cutoff) {
  require(cutoff >= 6, ErrorKind::InvalidArgument, "cutoff must be at least 6");
  validate(spec);
  const int padded = 2 * cutoff + 20;
  return std::visit(
      overloaded{
          [&](const Coherent& s) {
            const CVector v = coherent_amplitudes(s.alpha0, padded);
            return crop(v * v.adjoint(), cutoff);
          },
          [&](const ThermalCoherent& s) { return crop(displace(thermal_diagonal(s.f, padded), s.alpha0), cutoff); },
          [&](const SqueezedThermalCoherent& s) {
            CMatrix rho = thermal_diagonal(s.f, padded);
            if (s.z != Complex(0.0, 0.0)) {
              const CheckedOperator sq = squeeze_operator(s.z, padded);
              rho = sq.op.matrix() * rho * sq.op.matrix().adjoint();
            }
            return crop(displace(rho, s.alpha0), cutoff);
          },
          [&](const NumberDiagonal& s) {
            CMatrix rho = CMatrix::Zero(std::max<int>(cutoff, static_cast<int>(s.p.size())),
                                        std::max<int>(cutoff, static_cast<int>(s.p.size())));
            for (std::size_t n = 0; n < s.p.size(); ++n) rho(n, n) = s.p[n];
            return crop(rho, cutoff);
          },
      },
      spec);
}

SU11Exponent thermal_tfd_exponent(double nbar) {
  require(std::isfinite(nbar) && nbar >= 0.0, ErrorKind::InvalidArgument, "nbar must be >= 0");
  SU11Exponent e;
  e.plus = nbar;
  e.minus = nbar;
  e.k3 = -2.0 * nbar;
  return e;
}

PhiSample closed_form_sample(const StateSpec& spec, const OrderingParameter& a, Complex alpha) {
  if (a.is_p_limit()) {
    if (const auto* c = std::get_if<Coherent>(&spec)) return DeltaDescriptor{c->alpha0};
    fail(ErrorKind::SingularOrder, "a = 1 is singular for " + describe(spec));
  }
  return closed_form_phi(spec, a, alpha);
}

double closed_form_phi(const StateSpec& spec, const OrderingParameter& a, Complex alpha) {
  if (a.is_p_limit()) fail(ErrorKind::SingularOrder, "a = 1 has no pointwise value for " + describe(spec));
  const double av = a.value();
  return std::visit(
      overloaded{
          [&](const Coherent& s) {
            const double w = 1.0 - av;
            return std::exp(-std::norm(alpha - s.alpha0) / w) / (w * std::numbers::pi);
          },
          [&](const ThermalCoherent& s) {
            const double w = 1.0 - av * (1.0 - s.f);
            return (1.0 - s.f) / (w * std::numbers::pi) * std::exp(-(1.0 - s.f) * std::norm(alpha - s.alpha0) / w);
          },
          [&](const SqueezedThermalCoherent& s) { return squeezed_gaussian(alpha - s.alpha0, a.lambda(), s.z, s.f); },
          [&](const NumberDiagonal&) -> double {
            fail(ErrorKind::Unsupported, "no closed form for number-diagonal states; use the oracle");
          },
      },
      spec);
}

}  // namespace phasespace
