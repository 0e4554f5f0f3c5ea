#pragma once

// Truncated single-mode and doubled (thermofield) Fock-space linear algebra.
//
// Single-mode operators live on span{|0>,...,|N-1>}. The doubled space pairs
// a physical mode with a tilde mode; basis vector |n,m> sits at flat index
// n*N + m. Under this pairing a density matrix rho maps to the vector whose
// (n,m) entry is rho(n,m), i.e. |n,m> <-> |n><m|. Consequently
//
//   (A (x) I) |rho>  <->  A rho
//   (I (x) B) |rho>  <->  rho B^T
//
// and the tilde image of A is I (x) conj(A), which makes A|I> = (A~)^dag |I>
// an exact matrix identity at any cutoff.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace phasespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kDefaultCutoff = 40;
inline constexpr Complex kI{0.0, 1.0};

/// Dense operator on the truncated number basis.
class TruncatedOperator {
 public:
  explicit TruncatedOperator(CMatrix entries);

  static TruncatedOperator identity(int dim);
  static TruncatedOperator zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  Complex trace() const { return m_.trace(); }
  TruncatedOperator adjoint() const { return TruncatedOperator(m_.adjoint()); }

  friend TruncatedOperator operator*(const TruncatedOperator& x, const TruncatedOperator& y);
  friend TruncatedOperator operator+(const TruncatedOperator& x, const TruncatedOperator& y);
  friend TruncatedOperator operator-(const TruncatedOperator& x, const TruncatedOperator& y);
  friend TruncatedOperator operator*(Complex c, const TruncatedOperator& x);

 private:
  CMatrix m_;
};

/// Vector on the doubled space, flat index n*N + m.
class TwoModeVector {
 public:
  TwoModeVector(int mode_dim, CVector entries);

  int mode_dim() const { return n_; }
  const CVector& entries() const { return v_; }
  Complex at(int n, int m) const { return v_(static_cast<Eigen::Index>(n) * n_ + m); }

  /// Reshape back into an N x N matrix (inverse of tfd_vector).
  CMatrix as_matrix() const;

 private:
  int n_;
  CVector v_;
};

class TwoModeOperator {
 public:
  TwoModeOperator(int mode_dim, CMatrix entries);

  static TwoModeOperator identity(int mode_dim);

  int mode_dim() const { return n_; }
  const CMatrix& matrix() const { return m_; }

  TwoModeVector apply(const TwoModeVector& v) const;

  friend TwoModeOperator operator*(const TwoModeOperator& x, const TwoModeOperator& y);
  friend TwoModeOperator operator+(const TwoModeOperator& x, const TwoModeOperator& y);
  friend TwoModeOperator operator-(const TwoModeOperator& x, const TwoModeOperator& y);
  friend TwoModeOperator operator*(Complex c, const TwoModeOperator& x);

 private:
  int n_;
  CMatrix m_;
};

/// An operator plus the outcome of its truncation-safety heuristic.
struct CheckedOperator {
  TruncatedOperator op;
  bool truncation_safe = true;
  std::string warning;
};

struct LadderPair {
  TruncatedOperator annihilation;
  TruncatedOperator creation;
};

LadderPair ladder_operators(int cutoff);
TruncatedOperator number_operator(int cutoff);

/// exp(M) by Pade scaling-and-squaring, applied independently to each
/// connected block of M's sparsity pattern. Throws Overflow instead of
/// returning non-finite entries.
CMatrix matrix_exponential(const CMatrix& m);
TruncatedOperator matrix_exponential(const TruncatedOperator& m);
TwoModeOperator matrix_exponential(const TwoModeOperator& m);

/// D(alpha) = exp(alpha a^dag - alpha* a) on the truncated space.
/// Safe when |alpha|^2 <= N/4; otherwise a warning is attached.
CheckedOperator displacement_operator(Complex alpha, int cutoff);

/// S(z) = exp((z* a^2 - z a^dag^2)/2), z = r e^{i theta}.
CheckedOperator squeeze_operator(Complex z, int cutoff);

/// Exact (untruncated) matrix elements <m|D(alpha)|n> for m < rows, n < cols.
/// Evaluated through associated Laguerre polynomials of degree min(m,n), so
/// rows should be the small dimension.
CMatrix displacement_elements(Complex alpha, int rows, int cols);

/// Coherent-state amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!), n < cutoff.
CVector coherent_amplitudes(Complex alpha, int cutoff);

/// |I> = sum_n |n,n>; unnormalized (norm^2 = N).
TwoModeVector identity_state(int cutoff);

/// |rho> = (rho (x) I)|I>; validates rho as a density matrix.
TwoModeVector tfd_vector(const TruncatedOperator& rho);

/// Same map without validation, for arbitrary operators.
TwoModeVector vectorize(const TruncatedOperator& op);

/// A (x) I.
TwoModeOperator lift(const TruncatedOperator& op);

/// A~ = I (x) conj(A).
TwoModeOperator tilde_lift(const TruncatedOperator& op);

/// <u|v> (antilinear in u).
Complex overlap(const TwoModeVector& u, const TwoModeVector& v);

struct DensityDiagnostics {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool valid = false;
};

DensityDiagnostics diagnose_density(const TruncatedOperator& rho);
void require_density(const TruncatedOperator& rho);

/// sum_{n >= N - window} rho(n,n).
double tail_mass(const TruncatedOperator& rho, int window = 5);

/// Smallest-eigenvalue of the hermitian part.
double min_eigenvalue(const TruncatedOperator& op);

}  // namespace phasespace
