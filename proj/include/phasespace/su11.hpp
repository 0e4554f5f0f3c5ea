#pragma once

// su(1,1) group elements on the thermofield doubled space.
//
// Generators: K+ = a^dag a~^dag, K- = a a~, K3 = (a^dag a + a~^dag a~ + 1)/2,
// and the central element K0 = a^dag a - a~^dag a~.
//
// A normal form (G+, s, G-) stands for exp(G+ K+) s^{2 K3} exp(G- K-), i.e. the
// K3 factor exp((2 log s) K3) with s = sqrt(Gamma3) taken literally, so no
// logarithm branch ever appears. K0 and scalar exponents ride along additively.
//
// Composition uses the faithful 2x2 representation
//   K3 -> diag(1,-1)/2,  K+ -> [[0,1],[0,0]],  K- -> [[0,0],[-1,0]],
// under which the normal form maps to
//   [[s - G+ G-/s, G+/s], [-G-/s, 1/s]].
// Reading the normal form back off a 2x2 matrix [[A,B],[C,D]] gives
//   s = 1/D, G+ = B/D, G- = -C/D,
// singular exactly when D = 0.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phasespace/fock.hpp"

namespace phasespace {

using Mat2 = Eigen::Matrix2cd;

/// exp(plus K+ + k3 K3 + minus K- + k0 K0 + scalar).
struct SU11Exponent {
  Complex plus{};
  Complex k3{};
  Complex minus{};
  Complex k0{};
  Complex scalar{};
};

/// exp(k0 K0 + scalar) exp(plus K+) sqrt_k3^{2 K3} exp(minus K-).
struct SU11NormalForm {
  Complex plus{};
  Complex sqrt_k3{1.0, 0.0};
  Complex minus{};
  Complex k0{};
  Complex scalar{};

  static SU11NormalForm identity() { return {}; }
};

/// Ordering label a of the distribution family, a <= 1.
class OrderingParameter {
 public:
  explicit OrderingParameter(double a);

  double value() const { return a_; }
  /// a = 1: the P-function limit, singular for most states.
  bool is_p_limit() const { return a_ == 1.0; }
  /// a <= 1/2, where the generating series converges for every state.
  bool certified() const { return a_ <= 0.5; }
  /// lambda = -a/(1-a); throws SingularOrder at a = 1.
  double lambda() const;

 private:
  double a_;
};

Mat2 group_matrix(const SU11NormalForm& nf);
SU11NormalForm normal_form_from_matrix(const Mat2& m, Complex k0 = {}, Complex scalar = {});

/// 2x2 image of exp(plus K+ + k3 K3 + minus K-).
Mat2 exponentiate(const SU11Exponent& e);

SU11NormalForm disentangle(const SU11Exponent& e);

/// Normal form of the operator product left * right.
SU11NormalForm compose(const SU11NormalForm& left, const SU11NormalForm& right);

/// 2x2 image of exp(-w (K+ + K- - 2 K3)); entire in w.
Mat2 ordering_matrix(Complex w);

/// Normal form of exp(-a (K+ + K- - 2K3)) = (lambda, 1 - lambda, lambda).
SU11NormalForm ordering_factor(Complex lambda);

/// Coefficients of exp(-a(K+ + K- - 2K3)) * nf in closed form.
SU11NormalForm gamma_prime(Complex lambda, const SU11NormalForm& nf);
/// The same transform exactly as originally printed (G'+ over [1 - lambda G-]).
SU11NormalForm gamma_prime_printed(Complex lambda, const SU11NormalForm& nf);
/// Reference: 2x2 product ordering_matrix(a) * group_matrix(nf).
SU11NormalForm gamma_prime_by_composition(Complex lambda, const SU11NormalForm& nf);

/// Coefficients of exp(-a X0) * nf * exp(-(1-a) X0), X0 = K+ + K- - 2K3, in
/// closed form. This is the propagator sandwich.
SU11NormalForm gamma_double_prime(Complex lambda, const SU11NormalForm& nf);
SU11NormalForm gamma_double_prime_by_composition(Complex lambda, const SU11NormalForm& nf);

struct TransformArbitration {
  std::string transform;
  int samples = 0;
  double printed_max_deviation = 0.0;
  double implemented_max_deviation = 0.0;
  bool printed_agrees = false;
  bool implemented_agrees = false;
  std::string note;
};

/// Compares the printed and implemented closed-form transforms against the
/// 2x2 composition on random nonsingular inputs.
std::vector<TransformArbitration> arbitrate_transforms(int samples, std::uint64_t seed,
                                                       double tolerance = 1e-9);

struct GeneratorSet {
  TwoModeOperator k_plus;
  TwoModeOperator k_minus;
  TwoModeOperator k3;
  TwoModeOperator k0;
};

GeneratorSet su11_generators(int cutoff);

/// The algebra element plus K+ + k3 K3 + minus K- + k0 K0 + scalar as a matrix.
TwoModeOperator materialize_exponent(const SU11Exponent& e, int cutoff);

/// The group element of a normal form on the truncated doubled space. The
/// raising, diagonal and lowering factors each compress exactly, so this is
/// the exact compression of the infinite-dimensional operator.
TwoModeOperator materialize(const SU11NormalForm& nf, int cutoff);

}  // namespace phasespace
