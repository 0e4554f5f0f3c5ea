#include "phasespace/su11.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace {

constexpr double kSeriesThreshold = 1e-6;

// cosh(phi) and sinh(phi)/phi as functions of phi^2; both even, so the sign
// of the square root never matters.
void even_hyperbolics(Complex phi2, Complex& ch, Complex& shc) {
  if (std::abs(phi2) < kSeriesThreshold) {
    const Complex p2 = phi2, p4 = phi2 * phi2, p6 = p4 * phi2;
    ch = 1.0 + p2 / 2.0 + p4 / 24.0 + p6 / 720.0;
    shc = 1.0 + p2 / 6.0 + p4 / 120.0 + p6 / 5040.0;
    return;
  }
  const Complex phi = std::sqrt(phi2);
  ch = std::cosh(phi);
  shc = std::sinh(phi) / phi;
}

void require_nonsingular(Complex denom, double scale, const char* what) {
  if (!(std::abs(denom) > 1e-14 * std::max(scale, 1.0))) {
    std::ostringstream msg;
    msg << what << ": vanishing denominator |" << denom << "|";
    fail(ErrorKind::Singular, msg.str());
  }
}

double deviation(const SU11NormalForm& x, const SU11NormalForm& y) {
  return std::max({std::abs(x.plus - y.plus), std::abs(x.sqrt_k3 - y.sqrt_k3),
                   std::abs(x.minus - y.minus)});
}

}  // namespace

OrderingParameter::OrderingParameter(double a) : a_(a) {
  require(std::isfinite(a) && a <= 1.0, ErrorKind::InvalidArgument,
          "ordering parameter must satisfy a <= 1");
}

double OrderingParameter::lambda() const {
  require(!is_p_limit(), ErrorKind::SingularOrder, "a = 1 (P-function) has no finite lambda");
  return -a_ / (1.0 - a_);
}

Mat2 group_matrix(const SU11NormalForm& nf) {
  require(nf.sqrt_k3 != Complex(0.0, 0.0), ErrorKind::Singular, "normal form with sqrt(Gamma3) = 0");
  const Complex s = nf.sqrt_k3;
  Mat2 m;
  m << s - nf.plus * nf.minus / s, nf.plus / s, -nf.minus / s, 1.0 / s;
  return m;
}

SU11NormalForm normal_form_from_matrix(const Mat2& m, Complex k0, Complex scalar) {
  const Complex d = m(1, 1);
  require_nonsingular(d, m.cwiseAbs().maxCoeff(), "normal form");
  SU11NormalForm nf;
  nf.plus = m(0, 1) / d;
  nf.minus = -m(1, 0) / d;
  nf.sqrt_k3 = 1.0 / d;
  nf.k0 = k0;
  nf.scalar = scalar;
  return nf;
}

Mat2 exponentiate(const SU11Exponent& e) {
  // X = [[k3/2, plus], [-minus, -k3/2]] satisfies X^2 = phi^2 I.
  const Complex phi2 = e.k3 * e.k3 / 4.0 - e.plus * e.minus;
  Complex ch, shc;
  even_hyperbolics(phi2, ch, shc);
  Mat2 x;
  x << e.k3 / 2.0, e.plus, -e.minus, -e.k3 / 2.0;
  return ch * Mat2::Identity() + shc * x;
}

SU11NormalForm disentangle(const SU11Exponent& e) {
  const Complex phi2 = e.k3 * e.k3 / 4.0 - e.plus * e.minus;
  Complex ch, shc;
  even_hyperbolics(phi2, ch, shc);
  // (2 phi cosh phi - g3 sinh phi) / (2 phi)
  const Complex denom = ch - 0.5 * e.k3 * shc;
  require_nonsingular(denom, std::abs(ch) + std::abs(e.k3 * shc), "disentangle");
  SU11NormalForm nf;
  nf.plus = e.plus * shc / denom;
  nf.minus = e.minus * shc / denom;
  nf.sqrt_k3 = 1.0 / denom;
  nf.k0 = e.k0;
  nf.scalar = e.scalar;
  return nf;
}

SU11NormalForm compose(const SU11NormalForm& left, const SU11NormalForm& right) {
  return normal_form_from_matrix(group_matrix(left) * group_matrix(right), left.k0 + right.k0,
                                 left.scalar + right.scalar);
}

Mat2 ordering_matrix(Complex w) {
  // X0 = K+ + K- - 2K3 -> [[-1, 1], [-1, 1]], nilpotent.
  Mat2 x0;
  x0 << -1.0, 1.0, -1.0, 1.0;
  return Mat2::Identity() - w * x0;
}

SU11NormalForm ordering_factor(Complex lambda) {
  SU11NormalForm nf;
  nf.plus = lambda;
  nf.minus = lambda;
  nf.sqrt_k3 = 1.0 - lambda;
  return nf;
}

SU11NormalForm gamma_prime(Complex lambda, const SU11NormalForm& nf) {
  const Complex g3 = nf.sqrt_k3 * nf.sqrt_k3;
  const Complex den = 1.0 - lambda * nf.plus;
  require_nonsingular(den, 1.0, "gamma_prime");
  SU11NormalForm out = nf;
  out.plus = 1.0 - (1.0 - lambda) * (1.0 - nf.plus) / den;
  out.minus = 1.0 - ((1.0 - nf.minus) * den - lambda * g3) / den;
  out.sqrt_k3 = (1.0 - lambda) * nf.sqrt_k3 / den;
  return out;
}

SU11NormalForm gamma_prime_printed(Complex lambda, const SU11NormalForm& nf) {
  const Complex g3 = nf.sqrt_k3 * nf.sqrt_k3;
  const Complex den_plus = 1.0 - lambda * nf.minus;
  const Complex den = 1.0 - lambda * nf.plus;
  require_nonsingular(den_plus, 1.0, "gamma_prime_printed");
  require_nonsingular(den, 1.0, "gamma_prime_printed");
  SU11NormalForm out = nf;
  out.plus = 1.0 - (1.0 - lambda) * (1.0 - nf.plus) / den_plus;
  out.minus = 1.0 - ((1.0 - nf.minus) * (1.0 - lambda * nf.plus) - lambda * g3) / den;
  out.sqrt_k3 = (1.0 - lambda) * nf.sqrt_k3 / den;
  return out;
}

SU11NormalForm gamma_prime_by_composition(Complex lambda, const SU11NormalForm& nf) {
  require_nonsingular(1.0 - lambda, 1.0, "ordering factor");
  const Complex a = -lambda / (1.0 - lambda);
  return normal_form_from_matrix(ordering_matrix(a) * group_matrix(nf), nf.k0, nf.scalar);
}

SU11NormalForm gamma_double_prime(Complex lambda, const SU11NormalForm& nf) {
  const Complex g3 = nf.sqrt_k3 * nf.sqrt_k3;
  const Complex den = (lambda - nf.minus) * (1.0 - lambda * nf.plus) - lambda * g3;
  require_nonsingular(den, 1.0, "gamma_double_prime");
  const Complex one_l = 1.0 - lambda;
  SU11NormalForm out = nf;
  out.plus = 1.0 - one_l * ((1.0 - nf.plus) * (lambda - nf.minus) - g3) / den;
  out.minus = 1.0 + one_l * ((1.0 - nf.minus) * (1.0 - lambda * nf.plus) - lambda * g3) / den;
  out.sqrt_k3 = -one_l * one_l * nf.sqrt_k3 / den;
  return out;
}

SU11NormalForm gamma_double_prime_by_composition(Complex lambda, const SU11NormalForm& nf) {
  require_nonsingular(1.0 - lambda, 1.0, "ordering factor");
  const Complex a = -lambda / (1.0 - lambda);
  const Complex b = 1.0 / (1.0 - lambda);  // 1 - a
  const Mat2 m = ordering_matrix(a) * group_matrix(nf) * ordering_matrix(b);
  return normal_form_from_matrix(m, nf.k0, nf.scalar);
}

std::vector<TransformArbitration> arbitrate_transforms(int samples, std::uint64_t seed,
                                                       double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto rc = [&](double scale) { return Complex(scale * uni(rng), scale * uni(rng)); };

  TransformArbitration prime{"gamma_prime", 0, 0.0, 0.0, false, false, {}};
  TransformArbitration dprime{"gamma_double_prime", 0, 0.0, 0.0, false, false, {}};
  while (prime.samples < samples) {
    SU11NormalForm nf;
    nf.plus = rc(0.8);
    nf.minus = rc(0.8);
    nf.sqrt_k3 = Complex(1.0, 0.0) + rc(0.4);
    const Complex lambda(0.75 * uni(rng) - 0.25, 0.2 * uni(rng));
    const Complex g3 = nf.sqrt_k3 * nf.sqrt_k3;
    // Keep away from the singular set so the comparison measures formulas, not conditioning.
    if (std::abs(1.0 - lambda * nf.plus) < 0.1 || std::abs(1.0 - lambda * nf.minus) < 0.1) continue;
    if (std::abs((lambda - nf.minus) * (1.0 - lambda * nf.plus) - lambda * g3) < 0.1) continue;

    const SU11NormalForm ref1 = gamma_prime_by_composition(lambda, nf);
    prime.printed_max_deviation = std::max(prime.printed_max_deviation, deviation(gamma_prime_printed(lambda, nf), ref1));
    prime.implemented_max_deviation = std::max(prime.implemented_max_deviation, deviation(gamma_prime(lambda, nf), ref1));
    ++prime.samples;

    const SU11NormalForm ref2 = gamma_double_prime_by_composition(lambda, nf);
    const double d2 = deviation(gamma_double_prime(lambda, nf), ref2);
    dprime.printed_max_deviation = std::max(dprime.printed_max_deviation, d2);
    dprime.implemented_max_deviation = dprime.printed_max_deviation;
    ++dprime.samples;
  }
  for (auto* t : {&prime, &dprime}) {
    t->printed_agrees = t->printed_max_deviation <= tolerance;
    t->implemented_agrees = t->implemented_max_deviation <= tolerance;
  }
  prime.note = prime.printed_agrees
                   ? "printed form agrees with composition"
                   : "printed G'+ denominator [1 - lambda G-] disagrees with composition; "
                     "implemented [1 - lambda G+] agrees";
  dprime.note = dprime.printed_agrees ? "printed form agrees with composition"
                                      : "printed form disagrees with composition";
  return {prime, dprime};
}

// ---------------------------------------------------------------------------
// Materialization on the doubled space

GeneratorSet su11_generators(int cutoff) {
  const auto [a, ad] = ladder_operators(cutoff);
  const TruncatedOperator num = number_operator(cutoff);
  const TwoModeOperator a_phys = lift(a), ad_phys = lift(ad);
  // tilde_lift of a real matrix is I (x) A, so these are a~ and a~^dag.
  const TwoModeOperator a_tilde = tilde_lift(a), ad_tilde = tilde_lift(ad);
  const TwoModeOperator n_phys = lift(num), n_tilde = tilde_lift(num);
  const TwoModeOperator id = TwoModeOperator::identity(cutoff);
  return {ad_phys * ad_tilde, a_phys * a_tilde, Complex(0.5) * (n_phys + n_tilde + id), n_phys - n_tilde};
}

TwoModeOperator materialize_exponent(const SU11Exponent& e, int cutoff) {
  const GeneratorSet g = su11_generators(cutoff);
  return e.plus * g.k_plus + e.k3 * g.k3 + e.minus * g.k_minus + e.k0 * g.k0 +
         e.scalar * TwoModeOperator::identity(cutoff);
}

TwoModeOperator materialize(const SU11NormalForm& nf, int cutoff) {
  require(cutoff >= 4, ErrorKind::InvalidArgument, "materialize needs cutoff >= 4");
  require(nf.sqrt_k3 != Complex(0.0, 0.0), ErrorKind::Singular, "normal form with sqrt(Gamma3) = 0");
  const GeneratorSet g = su11_generators(cutoff);
  const CMatrix raise = matrix_exponential(CMatrix(nf.plus * g.k_plus.matrix()));
  const CMatrix lower = matrix_exponential(CMatrix(nf.minus * g.k_minus.matrix()));

  // s^{2K3} e^{k0 K0} e^{scalar} is diagonal: s^{n+m+1} e^{k0 (n-m)} e^{scalar}.
  const Eigen::Index dim = static_cast<Eigen::Index>(cutoff) * cutoff;
  CVector diag(dim);
  for (int n = 0; n < cutoff; ++n)
    for (int m = 0; m < cutoff; ++m)
      diag(static_cast<Eigen::Index>(n) * cutoff + m) =
          std::pow(nf.sqrt_k3, n + m + 1) * std::exp(nf.k0 * static_cast<double>(n - m) + nf.scalar);
  CMatrix out = raise * diag.asDiagonal() * lower;
  require(out.allFinite(), ErrorKind::Overflow, "materialized group element overflowed");
  return TwoModeOperator(cutoff, std::move(out));
}

}  // namespace phasespace
