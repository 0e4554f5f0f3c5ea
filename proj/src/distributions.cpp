#include "phasespace/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phasespace/errors.hpp"

namespace phasespace {

namespace {

constexpr double kInvPi = 1.0 / std::numbers::pi;

int support_size(const CMatrix& rho) {
  const double scale = rho.cwiseAbs().maxCoeff();
  int top = 0;
  for (int i = 0; i < rho.rows(); ++i) {
    const double row = std::max(rho.row(i).cwiseAbs().maxCoeff(), rho.col(i).cwiseAbs().maxCoeff());
    if (row > 1e-17 * scale) top = i;
  }
  return top + 1;
}

int sum_terms(int support, double lambda, Complex alpha) {
  if (lambda == 0.0) return 1;
  const double r = std::sqrt(static_cast<double>(support)) + std::abs(alpha);
  int terms = static_cast<int>(std::ceil(r * r + 10.0 * r + 30.0));
  if (std::abs(lambda) < 1.0) {
    const int geometric = static_cast<int>(std::ceil(std::log(1e-18) / std::log(std::abs(lambda)))) + 1;
    terms = std::min(terms, std::max(geometric, 1));
  }
  return terms;
}

void require_coverage(const PhaseSpaceGrid& grid, const StateSpec& spec) {
  const double need = std::abs(center(spec)) + 4.0;
  if (grid.half_width() < need) {
    std::ostringstream msg;
    msg << "grid half-width " << grid.half_width() << " < |alpha0| + 4 = " << need;
    fail(ErrorKind::Coverage, msg.str());
  }
}

// Fourth-order central-difference d^2/dalpha dalpha* = (d_xx + d_yy)/4 on the
// interior at least `margin` samples from the edge; zero elsewhere.
std::vector<double> mixed_laplacian(const std::vector<double>& f, int p, double h, int margin) {
  std::vector<double> out(f.size(), 0.0);
  const double scale = 1.0 / (12.0 * h * h) / 4.0;
  auto at = [&](int ix, int iy) { return f[static_cast<std::size_t>(iy) * p + ix]; };
  for (int iy = margin; iy < p - margin; ++iy)
    for (int ix = margin; ix < p - margin; ++ix) {
      const double fxx = -at(ix + 2, iy) + 16.0 * at(ix + 1, iy) - 30.0 * at(ix, iy) + 16.0 * at(ix - 1, iy) -
                         at(ix - 2, iy);
      const double fyy = -at(ix, iy + 2) + 16.0 * at(ix, iy + 1) - 30.0 * at(ix, iy) + 16.0 * at(ix, iy - 1) -
                         at(ix, iy - 2);
      out[static_cast<std::size_t>(iy) * p + ix] = scale * (fxx + fyy);
    }
  return out;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::Oracle: return "oracle";
    case Method::Evolved: return "evolved";
    case Method::Convolved: return "convolved";
  }
  return "unknown";
}

std::string_view eval_method_name(EvalMethod m) {
  return m == EvalMethod::ClosedForm ? "closed-form" : "oracle";
}

// ---------------------------------------------------------------------------
// Generating-function oracle

DensityOracle::DensityOracle(const TruncatedOperator& rho, const OrderingParameter& a, Variant variant)
    : lambda_(a.lambda()), certified_(a.certified()), variant_(variant) {
  const int s = support_size(rho.matrix());
  rho_ = rho.matrix().topLeftCorner(s, s);
  if (variant_ == Variant::Direct) return;
  const CMatrix herm = 0.5 * (rho_ + rho_.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  const Eigen::VectorXd& w = eig.eigenvalues();
  const double top = w.cwiseAbs().maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < w.size(); ++i)
    if (std::abs(w(i)) > 1e-16 * top) keep.push_back(i);
  vectors_.resize(s, static_cast<Eigen::Index>(keep.size()));
  signs_.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    vectors_.col(c) = std::sqrt(std::abs(w(keep[c]))) * eig.eigenvectors().col(keep[c]);
    signs_(c) = w(keep[c]) < 0.0 ? -1.0 : 1.0;
  }
  anti_hermitian_ = (0.5 * (rho_ - rho_.adjoint())).norm();
}

int DensityOracle::terms(Complex alpha) const { return sum_terms(support(), lambda_, alpha); }

OracleSample DensityOracle::sample(Complex alpha) const {
  require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()), ErrorKind::InvalidArgument,
          "phase-space point is not finite");
  const int s = support();
  const int t = terms(alpha);
  const CMatrix d = displacement_elements(alpha, s, t);
  const double pref = (1.0 - lambda_) * kInvPi;
  if (variant_ == Variant::Direct) {
    const CMatrix m = rho_ * d;
    Complex sum = 0.0;
    double power = 1.0;
    for (int n = 0; n < t; ++n, power *= lambda_) sum += power * d.col(n).dot(m.col(n));
    return {pref * sum.real(), std::abs(pref * sum.imag())};
  }
  const CMatrix amp = vectors_.adjoint() * d;
  double sum = 0.0, power = 1.0;
  for (int n = 0; n < t; ++n, power *= lambda_) sum += power * signs_.dot(amp.col(n).cwiseAbs2());
  // Each |<n|D^dag X D|n>| is at most ||X|| for the dropped anti-hermitian part X.
  double weights = static_cast<double>(t);
  if (std::abs(lambda_) < 1.0) weights = std::min(weights, 1.0 / (1.0 - std::abs(lambda_)));
  return {pref * sum, std::abs(pref) * anti_hermitian_ * weights};
}

double phi_from_density(const TruncatedOperator& rho, const OrderingParameter& a, Complex alpha) {
  return DensityOracle(rho, a).sample(alpha).value;
}

TruncatedOperator delta_operator(const OrderingParameter& a, Complex alpha, int cutoff) {
  require(cutoff >= 2, ErrorKind::InvalidArgument, "cutoff must be >= 2");
  const double lambda = a.lambda();
  const int t = std::max(sum_terms(cutoff, lambda, alpha), cutoff);
  const CMatrix d = displacement_elements(alpha, cutoff, t);
  CVector rho0(t);
  double power = 1.0 - lambda;
  for (int n = 0; n < t; ++n, power *= lambda) rho0(n) = power;
  CMatrix delta = d * rho0.asDiagonal() * d.adjoint();
  delta = (0.5 * (delta + delta.adjoint())).eval();
  return TruncatedOperator(std::move(delta));
}

// ---------------------------------------------------------------------------
// Grid evaluation

DistributionField evaluate_grid(const StateSpec& spec, const OrderingParameter& a, const PhaseSpaceGrid& grid,
                                EvalMethod method, const EvalOptions& options) {
  validate(spec);
  if (options.enforce_coverage) require_coverage(grid, spec);
  if (method == EvalMethod::Oracle) {
    DistributionField field =
        evaluate_grid(density_matrix(spec, options.cutoff), a, grid, describe(spec), options);
    field.support = support_radius(spec);
    return field;
  }
  if (a.is_p_limit()) fail(ErrorKind::SingularOrder, "a = 1 cannot be sampled for " + describe(spec));
  require(has_closed_form(spec), ErrorKind::Unsupported, "no closed form for " + describe(spec));
  std::vector<double> values = map_indices<double>(
      options.execution, grid.size(), [&](std::size_t i) { return closed_form_phi(spec, a, grid.point(i)); });
  return DistributionField{grid, std::move(values), a, {describe(spec), 0.0, Method::ClosedForm}, 0.0, true,
                           support_radius(spec)};
}

DistributionField evaluate_grid(const TruncatedOperator& rho, const OrderingParameter& a,
                                const PhaseSpaceGrid& grid, const std::string& source,
                                const EvalOptions& options) {
  const DensityOracle oracle(rho, a);
  const std::vector<OracleSample> samples = map_indices<OracleSample>(
      options.execution, grid.size(), [&](std::size_t i) { return oracle.sample(grid.point(i)); });
  std::vector<double> values(samples.size());
  double residue = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    values[i] = samples[i].value;
    residue = std::max(residue, samples[i].imag_residue);
  }
  return DistributionField{grid, std::move(values), a, {source, 0.0, Method::Oracle}, residue, oracle.certified(), 0.0};
}

// ---------------------------------------------------------------------------
// Order conversion

DistributionField convolve_to_lower_order(const DistributionField& field, double b, Execution execution) {
  require(std::isfinite(b) && b > 0.0, ErrorKind::InvalidArgument, "convolution width b must be positive");
  const PhaseSpaceGrid& grid = field.grid;
  if (field.support > 0.0 && grid.half_width() < field.support + 4.0 * std::sqrt(b)) {
    std::ostringstream msg;
    msg << "grid half-width " << grid.half_width() << " leaves less than 4 sqrt(b) = " << 4.0 * std::sqrt(b)
        << " beyond the support radius " << field.support;
    fail(ErrorKind::Coverage, msg.str());
  }
  const int p = grid.points();
  const double h = grid.spacing();
  const int reach = std::min(p - 1, static_cast<int>(std::ceil(std::sqrt(40.0 * b) / h)));
  std::vector<double> kernel(2 * reach + 1);
  double total = 0.0;
  for (int m = -reach; m <= reach; ++m) total += kernel[m + reach] = std::exp(-(m * h) * (m * h) / b);
  for (double& k : kernel) k /= total;

  auto pass = [&](const std::vector<double>& in, bool along_x) {
    return map_indices<double>(execution, in.size(), [&](std::size_t flat) {
      const int ix = static_cast<int>(flat % p), iy = static_cast<int>(flat / p);
      const int c = along_x ? ix : iy;
      double acc = 0.0;
      for (int m = std::max(-reach, -c); m <= std::min(reach, p - 1 - c); ++m) {
        const std::size_t src = along_x ? static_cast<std::size_t>(iy) * p + (ix + m)
                                        : static_cast<std::size_t>(iy + m) * p + ix;
        acc += kernel[m + reach] * in[src];
      }
      return acc;
    });
  };
  DistributionField out = field;
  out.values = pass(pass(field.values, true), false);
  out.order = OrderingParameter(field.order.value() - b);
  out.provenance.method = Method::Convolved;
  return out;
}

OrderCheckReport differential_order_check(const DistributionField& field_b, const DistributionField& field_a) {
  require(field_b.grid.same_as(field_a.grid), ErrorKind::GridMismatch, "order check needs a common grid");
  const int p = field_b.grid.points();
  require(p >= 11, ErrorKind::InvalidArgument, "order check needs at least 11 points per axis");
  OrderCheckReport report;
  report.delta = field_a.order.value() - field_b.order.value();
  require(std::abs(report.delta) <= 0.05 + 1e-15, ErrorKind::InvalidArgument, "order check needs |a - b| <= 0.05");
  const double h = field_b.grid.spacing();
  const std::vector<double> d1 = mixed_laplacian(field_b.values, p, h, 2);
  const std::vector<double> d2 = mixed_laplacian(d1, p, h, 4);
  for (int iy = 4; iy < p - 4; ++iy)
    for (int ix = 4; ix < p - 4; ++ix) {
      const std::size_t i = static_cast<std::size_t>(iy) * p + ix;
      const double predicted = field_b.values[i] - report.delta * d1[i];
      report.max_residual = std::max(report.max_residual, std::abs(field_a.values[i] - predicted));
      report.second_order = std::max(report.second_order, std::abs(0.5 * report.delta * report.delta * d2[i]));
    }
  if (report.delta != 0.0) report.coefficient = report.max_residual / (report.delta * report.delta);
  report.passed = report.max_residual <= 2.0 * report.second_order + 1e-12;
  return report;
}

// ---------------------------------------------------------------------------
// Quadrature

IntegralReport integrate_checked(const DistributionField& field) {
  IntegralReport report;
  const PhaseSpaceGrid& g = field.grid;
  double peak = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    report.value += g.weight(i) * field.values[i];
    peak = std::max(peak, std::abs(field.values[i]));
    const int ix = static_cast<int>(i % g.points()), iy = static_cast<int>(i / g.points());
    if (ix == 0 || iy == 0 || ix == g.points() - 1 || iy == g.points() - 1)
      edge = std::max(edge, std::abs(field.values[i]));
  }
  if (peak > 0.0 && edge > 1e-6 * peak) {
    report.covered = false;
    std::ostringstream msg;
    msg << "field at the grid boundary reaches " << edge / peak << " of its peak; integral is truncated";
    report.warning = msg.str();
  }
  return report;
}

double integrate(const DistributionField& field) { return integrate_checked(field).value; }

double overlap_trace(const DistributionField& field_rho, const DistributionField& field_op) {
  const double sum = field_rho.order.value() + field_op.order.value();
  if (std::abs(sum - 1.0) >= 1e-12) {
    std::ostringstream msg;
    msg << "orders " << field_rho.order.value() << " and " << field_op.order.value() << " are not complementary";
    fail(ErrorKind::OrderMismatch, msg.str());
  }
  require(field_rho.grid.same_as(field_op.grid), ErrorKind::GridMismatch, "overlap_trace needs a common grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < field_rho.grid.size(); ++i)
    acc += field_rho.grid.weight(i) * field_rho.values[i] * field_op.values[i];
  return std::numbers::pi * acc;
}

Complex field_mean(const DistributionField& field) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < field.grid.size(); ++i)
    acc += field.grid.weight(i) * field.values[i] * field.grid.point(i);
  return acc;
}

double max_abs_diff(const DistributionField& x, const DistributionField& y) {
  require(x.grid.same_as(y.grid), ErrorKind::GridMismatch, "fields live on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < x.values.size(); ++i) m = std::max(m, std::abs(x.values[i] - y.values[i]));
  return m;
}

}  // namespace phasespace
