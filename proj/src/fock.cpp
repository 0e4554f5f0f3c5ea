#include "phasespace/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace {

void require_cutoff(int cutoff) {
  require(cutoff >= 2, ErrorKind::InvalidArgument,
          "Fock cutoff must be >= 2, got " + std::to_string(cutoff));
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

double log_factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(2048);
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  return n < static_cast<int>(table.size()) ? table[n] : std::lgamma(n + 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// TruncatedOperator

TruncatedOperator::TruncatedOperator(CMatrix entries) : m_(std::move(entries)) {
  require(m_.rows() == m_.cols(), ErrorKind::InvalidArgument, "operator must be square");
  require(m_.rows() >= 2, ErrorKind::InvalidArgument, "operator dimension must be >= 2");
  require(m_.allFinite(), ErrorKind::InvalidArgument, "operator has non-finite entries");
}

TruncatedOperator TruncatedOperator::identity(int dim) {
  require_cutoff(dim);
  return TruncatedOperator(CMatrix::Identity(dim, dim));
}

TruncatedOperator TruncatedOperator::zero(int dim) {
  require_cutoff(dim);
  return TruncatedOperator(CMatrix::Zero(dim, dim));
}

TruncatedOperator operator*(const TruncatedOperator& x, const TruncatedOperator& y) {
  return TruncatedOperator(x.m_ * y.m_);
}
TruncatedOperator operator+(const TruncatedOperator& x, const TruncatedOperator& y) {
  return TruncatedOperator(x.m_ + y.m_);
}
TruncatedOperator operator-(const TruncatedOperator& x, const TruncatedOperator& y) {
  return TruncatedOperator(x.m_ - y.m_);
}
TruncatedOperator operator*(Complex c, const TruncatedOperator& x) {
  return TruncatedOperator(c * x.m_);
}

// ---------------------------------------------------------------------------
// Two-mode types

TwoModeVector::TwoModeVector(int mode_dim, CVector entries) : n_(mode_dim), v_(std::move(entries)) {
  require_cutoff(mode_dim);
  require(v_.size() == static_cast<Eigen::Index>(mode_dim) * mode_dim, ErrorKind::InvalidArgument,
          "two-mode vector length must be N^2");
}

CMatrix TwoModeVector::as_matrix() const {
  CMatrix out(n_, n_);
  for (int n = 0; n < n_; ++n)
    for (int m = 0; m < n_; ++m) out(n, m) = at(n, m);
  return out;
}

TwoModeOperator::TwoModeOperator(int mode_dim, CMatrix entries) : n_(mode_dim), m_(std::move(entries)) {
  require_cutoff(mode_dim);
  const Eigen::Index d = static_cast<Eigen::Index>(mode_dim) * mode_dim;
  require(m_.rows() == d && m_.cols() == d, ErrorKind::InvalidArgument,
          "two-mode operator must be N^2 x N^2");
}

TwoModeOperator TwoModeOperator::identity(int mode_dim) {
  const Eigen::Index d = static_cast<Eigen::Index>(mode_dim) * mode_dim;
  return TwoModeOperator(mode_dim, CMatrix::Identity(d, d));
}

TwoModeVector TwoModeOperator::apply(const TwoModeVector& v) const {
  require(v.mode_dim() == n_, ErrorKind::InvalidArgument, "two-mode dimension mismatch");
  return TwoModeVector(n_, m_ * v.entries());
}

TwoModeOperator operator*(const TwoModeOperator& x, const TwoModeOperator& y) {
  return TwoModeOperator(x.n_, x.m_ * y.m_);
}
TwoModeOperator operator+(const TwoModeOperator& x, const TwoModeOperator& y) {
  return TwoModeOperator(x.n_, x.m_ + y.m_);
}
TwoModeOperator operator-(const TwoModeOperator& x, const TwoModeOperator& y) {
  return TwoModeOperator(x.n_, x.m_ - y.m_);
}
TwoModeOperator operator*(Complex c, const TwoModeOperator& x) {
  return TwoModeOperator(x.n_, c * x.m_);
}

// ---------------------------------------------------------------------------
// Ladder operators and exponentials

LadderPair ladder_operators(int cutoff) {
  require_cutoff(cutoff);
  CMatrix a = CMatrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  CMatrix ad = a.adjoint();
  return {TruncatedOperator(std::move(a)), TruncatedOperator(std::move(ad))};
}

TruncatedOperator number_operator(int cutoff) {
  require_cutoff(cutoff);
  CMatrix n = CMatrix::Zero(cutoff, cutoff);
  for (int k = 0; k < cutoff; ++k) n(k, k) = static_cast<double>(k);
  return TruncatedOperator(std::move(n));
}

CMatrix matrix_exponential(const CMatrix& m) {
  require(m.rows() == m.cols(), ErrorKind::InvalidArgument, "matrix_exponential needs a square matrix");
  require(m.allFinite(), ErrorKind::InvalidArgument, "matrix_exponential input is not finite");
  const int dim = static_cast<int>(m.rows());

  // Group indices into connected components of the nonzero pattern; exp acts
  // blockwise on them (sector structure of the doubled space makes this pay).
  std::vector<int> parent(dim);
  std::iota(parent.begin(), parent.end(), 0);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r)
      if (r != c && m(r, c) != Complex(0.0, 0.0)) {
        const int ra = find_root(parent, r);
        const int rb = find_root(parent, c);
        if (ra != rb) parent[ra] = rb;
      }
  std::vector<std::vector<int>> blocks(dim);
  for (int i = 0; i < dim; ++i) blocks[find_root(parent, i)].push_back(i);

  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& idx : blocks) {
    if (idx.empty()) continue;
    const int b = static_cast<int>(idx.size());
    if (b == 1) {
      out(idx[0], idx[0]) = std::exp(m(idx[0], idx[0]));
      continue;
    }
    CMatrix sub(b, b);
    for (int j = 0; j < b; ++j)
      for (int i = 0; i < b; ++i) sub(i, j) = m(idx[i], idx[j]);
    CMatrix e = sub.exp();
    for (int j = 0; j < b; ++j)
      for (int i = 0; i < b; ++i) out(idx[i], idx[j]) = e(i, j);
  }
  if (!out.allFinite()) {
    std::ostringstream msg;
    msg << "matrix exponential overflowed (input 1-norm "
        << m.cwiseAbs().colwise().sum().maxCoeff() << ")";
    fail(ErrorKind::Overflow, msg.str());
  }
  return out;
}

TruncatedOperator matrix_exponential(const TruncatedOperator& m) {
  return TruncatedOperator(matrix_exponential(m.matrix()));
}

TwoModeOperator matrix_exponential(const TwoModeOperator& m) {
  return TwoModeOperator(m.mode_dim(), matrix_exponential(m.matrix()));
}

CheckedOperator displacement_operator(Complex alpha, int cutoff) {
  require_cutoff(cutoff);
  require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()), ErrorKind::InvalidArgument,
          "displacement amplitude is not finite");
  const auto [a, ad] = ladder_operators(cutoff);
  CMatrix gen = alpha * ad.matrix() - std::conj(alpha) * a.matrix();
  CheckedOperator out{TruncatedOperator(matrix_exponential(gen)), true, {}};
  if (std::norm(alpha) > cutoff / 4.0) {
    out.truncation_safe = false;
    std::ostringstream msg;
    msg << "|alpha|^2 = " << std::norm(alpha) << " exceeds N/4 = " << cutoff / 4.0;
    out.warning = msg.str();
  }
  return out;
}

CheckedOperator squeeze_operator(Complex z, int cutoff) {
  require_cutoff(cutoff);
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::InvalidArgument,
          "squeeze parameter is not finite");
  const auto [a, ad] = ladder_operators(cutoff);
  const CMatrix a2 = a.matrix() * a.matrix();
  const CMatrix ad2 = ad.matrix() * ad.matrix();
  CMatrix gen = 0.5 * (std::conj(z) * a2 - z * ad2);
  CheckedOperator out{TruncatedOperator(matrix_exponential(gen)), true, {}};
  const double r_max = 1.5 * std::min(1.0, cutoff / static_cast<double>(kDefaultCutoff));
  if (std::abs(z) > r_max) {
    out.truncation_safe = false;
    std::ostringstream msg;
    msg << "squeeze r = " << std::abs(z) << " exceeds " << r_max << " at N = " << cutoff;
    out.warning = msg.str();
  }
  return out;
}

CMatrix displacement_elements(Complex alpha, int rows, int cols) {
  require(rows >= 1 && cols >= 1, ErrorKind::InvalidArgument, "empty displacement block");
  CMatrix out = CMatrix::Zero(rows, cols);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    for (int i = 0; i < std::min(rows, cols); ++i) out(i, i) = 1.0;
    return out;
  }
  const double x = r * r;
  const double log_r = std::log(r);
  const double phase = std::arg(alpha);
  const double phase_neg = std::arg(-std::conj(alpha));
  const int dmax = std::min(rows, cols) - 1;
  const int kmax = std::max(rows, cols) - 1;
  std::vector<double> lag(dmax + 1);

  // <m|D|n> = sqrt(d!/(d+k)!) c^k e^{-x/2} L_d^{(k)}(x), d = min(m,n), k = |m-n|,
  // c = alpha for m >= n and c = -alpha* for m < n.
  for (int k = 0; k <= kmax; ++k) {
    lag[0] = 1.0;
    if (dmax >= 1) lag[1] = 1.0 + k - x;
    for (int d = 1; d < dmax; ++d)
      lag[d + 1] = ((2.0 * d + 1.0 + k - x) * lag[d] - (d + k) * lag[d - 1]) / (d + 1.0);
    for (int d = 0; d <= dmax; ++d) {
      const double log_mag = 0.5 * (log_factorial(d) - log_factorial(d + k)) + k * log_r - 0.5 * x;
      const double mag = std::exp(log_mag) * lag[d];
      const int lower_row = d + k;  // m = d + k, n = d
      if (lower_row < rows && d < cols) out(lower_row, d) = std::polar(mag, k * phase);
      if (k > 0 && d < rows && d + k < cols) out(d, d + k) = std::polar(mag, k * phase_neg);
    }
  }
  return out;
}

CVector coherent_amplitudes(Complex alpha, int cutoff) {
  require(cutoff >= 1, ErrorKind::InvalidArgument, "cutoff must be positive");
  CVector v(cutoff);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < cutoff; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return v;
}

// ---------------------------------------------------------------------------
// Thermofield doubling

TwoModeVector identity_state(int cutoff) {
  require_cutoff(cutoff);
  CVector v = CVector::Zero(static_cast<Eigen::Index>(cutoff) * cutoff);
  for (int n = 0; n < cutoff; ++n) v(static_cast<Eigen::Index>(n) * cutoff + n) = 1.0;
  return TwoModeVector(cutoff, std::move(v));
}

TwoModeVector vectorize(const TruncatedOperator& op) {
  const int n = op.dim();
  CVector v(static_cast<Eigen::Index>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) v(static_cast<Eigen::Index>(r) * n + c) = op(r, c);
  return TwoModeVector(n, std::move(v));
}

TwoModeVector tfd_vector(const TruncatedOperator& rho) {
  require_density(rho);
  return vectorize(rho);
}

TwoModeOperator lift(const TruncatedOperator& op) {
  const int n = op.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  return TwoModeOperator(n, Eigen::kroneckerProduct(op.matrix(), id).eval());
}

TwoModeOperator tilde_lift(const TruncatedOperator& op) {
  const int n = op.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  return TwoModeOperator(n, Eigen::kroneckerProduct(id, op.matrix().conjugate().eval()).eval());
}

Complex overlap(const TwoModeVector& u, const TwoModeVector& v) {
  require(u.mode_dim() == v.mode_dim(), ErrorKind::InvalidArgument, "two-mode dimension mismatch");
  return u.entries().dot(v.entries());
}

// ---------------------------------------------------------------------------
// Density diagnostics

double min_eigenvalue(const TruncatedOperator& op) {
  const CMatrix h = 0.5 * (op.matrix() + op.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityDiagnostics diagnose_density(const TruncatedOperator& rho) {
  DensityDiagnostics d;
  d.hermiticity_error = (rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(rho.trace() - 1.0);
  d.min_eigenvalue = min_eigenvalue(rho);
  d.valid = d.hermiticity_error <= 1e-12 && d.trace_error <= 1e-10 && d.min_eigenvalue >= -1e-10;
  return d;
}

void require_density(const TruncatedOperator& rho) {
  const DensityDiagnostics d = diagnose_density(rho);
  if (!d.valid) {
    std::ostringstream msg;
    msg << "not a density matrix: hermiticity error " << d.hermiticity_error << ", trace error "
        << d.trace_error << ", min eigenvalue " << d.min_eigenvalue;
    fail(ErrorKind::InvalidDensity, msg.str());
  }
}

double tail_mass(const TruncatedOperator& rho, int window) {
  const int n = rho.dim();
  double mass = 0.0;
  for (int k = std::max(0, n - window); k < n; ++k) mass += std::abs(rho(k, k).real());
  return mass;
}

}  // namespace phasespace
