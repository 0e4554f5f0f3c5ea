#include "phasespace/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "phasespace/cli/output.hpp"
#include "phasespace/cli/verify.hpp"
#include "phasespace/distributions.hpp"
#include "phasespace/evolution.hpp"
#include "phasespace/lindblad.hpp"

namespace phasespace::cli {

namespace {

constexpr double kDualPathTolerance = 1e-7;
constexpr double kOracleTolerance = 1e-6;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

const StateSpec& require_state(const ScenarioConfig& c) {
  if (!c.state) fail(ErrorKind::Config, "config has no 'state'");
  return *c.state;
}

std::vector<double> orders_of(const ScenarioConfig& c) {
  if (c.orders.empty()) fail(ErrorKind::Config, "config has no 'order' or 'orders'");
  return c.orders;
}

EvalMethod resolve(MethodChoice m, const StateSpec& s) {
  if (m == MethodChoice::Oracle) return EvalMethod::Oracle;
  if (m == MethodChoice::ClosedForm) return EvalMethod::ClosedForm;
  return has_closed_form(s) ? EvalMethod::ClosedForm : EvalMethod::Oracle;
}

MethodChoice method_of(const ScenarioConfig& c, const RunOptions& o) { return o.method.value_or(c.method); }

OutputSink make_sink(const ScenarioConfig& c, const RunOptions& o) { return OutputSink(o.out.value_or(c.output), c); }

// The single code path behind dist output and the t = 0 entry of evolve.
DistributionField dist_field(const ScenarioConfig& c, double a, EvalMethod method) {
  EvalOptions options;
  options.cutoff = c.cutoff;
  return evaluate_grid(require_state(c), OrderingParameter(a), resolve_grid(c), method, options);
}

int finish(const OutputSink& sink, int status, std::ostream& log) {
  for (const std::string& name : sink.golden_mismatches()) {
    log << "golden-mismatch " << name << "\n";
    status = 1;
  }
  return status;
}

std::string trajectory_header() { return "t,re_mean,im_mean,integral\n"; }

std::string trajectory_row(double t, const DistributionField& f) {
  const Complex m = field_mean(f);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", t, m.real(), m.imag(), integrate(f));
  return buf;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Singular:
    case ErrorKind::Overflow:
    case ErrorKind::Stability:
    case ErrorKind::TraceDrift:
    case ErrorKind::TailBound:
      return 1;
    default:
      return 2;
  }
}

int cmd_dist(const ScenarioConfig& c, const RunOptions& o, std::ostream& log) {
  const StateSpec& state = require_state(c);
  if (c.model || !c.times.empty()) fail(ErrorKind::Config, "dist takes no 'model' or 'times'");
  OutputSink sink = make_sink(c, o);
  const MethodChoice choice = method_of(c, o);
  int status = 0;
  for (double a : orders_of(c)) {
    const OrderingParameter order(a);
    if (order.is_p_limit()) {
      const PhiSample s = closed_form_sample(state, order, 0.0);
      const Complex at = std::get<DeltaDescriptor>(s).center;
      nlohmann::json delta = {{"type", "delta"}, {"center", {at.real(), at.imag()}}, {"order", 1.0},
                              {"source", describe(state)}, {"version", kVersion}};
      sink.write_text("dist_a1.delta.json", delta.dump(2) + "\n");
      log << "a=1 delta center " << at.real() << "," << at.imag() << "\n";
      continue;
    }
    if (choice == MethodChoice::Both) {
      const DistributionField closed = dist_field(c, a, EvalMethod::ClosedForm);
      const DistributionField oracle = dist_field(c, a, EvalMethod::Oracle);
      const double diff = max_abs_diff(closed, oracle);
      sink.write_field("dist_a" + tag(a) + "_closed-form.csv", closed, {{"max_abs_diff", diff}});
      sink.write_field("dist_a" + tag(a) + "_oracle.csv", oracle, {{"max_abs_diff", diff}});
      log << "max_abs_diff a=" << tag(a) << " " << fmt(diff) << (diff < kDualPathTolerance ? " ok" : " FAIL") << "\n";
      if (!(diff < kDualPathTolerance)) status = 1;
      continue;
    }
    const DistributionField field = dist_field(c, a, resolve(choice, state));
    const IntegralReport norm = integrate_checked(field);
    sink.write_field("dist_a" + tag(a) + ".csv", field, {{"integral", norm.value}});
    log << "dist a=" << tag(a) << " method=" << method_name(field.provenance.method)
        << " integral=" << fmt(norm.value) << (norm.covered ? "" : " warning: " + norm.warning) << "\n";
  }
  return finish(sink, status, log);
}

int cmd_evolve(const ScenarioConfig& c, const RunOptions& o, std::ostream& log) {
  const StateSpec& state = require_state(c);
  if (!c.model) fail(ErrorKind::Config, "evolve needs a 'model'");
  if (c.times.empty()) fail(ErrorKind::Config, "evolve needs 'times'");
  const MasterEquationParams& model = *c.model;
  const PhaseSpaceGrid grid = resolve_grid(c);
  const EvalMethod initial_method = resolve(method_of(c, o), state);
  const auto* coherent = std::get_if<Coherent>(&state);
  const bool use_kernel = c.kernel || coherent == nullptr;
  OutputSink sink = make_sink(c, o);

  std::vector<Snapshot> snapshots;
  if (o.oracle) {
    IntegratorConfig ic;
    ic.dt = c.dt;
    ic.record_times = c.times;
    snapshots = integrate(model, density_matrix(state, c.cutoff), ic);
  }

  int status = 0;
  std::ostringstream report;
  report << "model " << describe(model) << "\nstate " << describe(state) << "\n";
  for (double a : orders_of(c)) {
    const OrderingParameter order(a);
    std::string trajectory = trajectory_header();
    std::optional<DistributionField> start, first, last;
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      const double t = c.times[i];
      DistributionField field = [&] {
        if (t == 0.0) return dist_field(c, a, initial_method);
        if (!use_kernel) return evolve_coherent_grid(model, coherent->alpha0, order, t, grid);
        if (!start) start = dist_field(c, a, initial_method);
        return phi_evolved_from_field(model, order, t, *start);
      }();
      nlohmann::json extra = {{"model", describe(model)}, {"kernel", use_kernel}};
      if (o.oracle) {
        const DistributionField reference =
            evaluate_grid(snapshots[i].rho, order, grid, describe(state) + " (lindblad)", EvalOptions{});
        const double diff = max_abs_diff(field, reference);
        extra["oracle_max_abs_diff"] = diff;
        const bool ok = diff < kOracleTolerance;
        report << "oracle t=" << tag(t) << " a=" << tag(a) << " max_abs_diff=" << fmt(diff) << (ok ? " ok" : " FAIL")
               << "\n";
        log << "oracle t=" << tag(t) << " a=" << tag(a) << " max_abs_diff " << fmt(diff) << (ok ? " ok" : " FAIL")
            << "\n";
        if (!ok) status = 1;
      }
      sink.write_field("evolve_t" + tag(t) + "_a" + tag(a) + ".csv", field, extra);
      trajectory += trajectory_row(t, field);
      if (i == 0) first = field;
      last = field;
    }
    if (first && last) {
      const double drift = max_abs_diff(*first, *last);
      report << "final_vs_initial_max_diff a=" << tag(a) << " " << fmt(drift) << "\n";
      log << "final_vs_initial_max_diff a=" << tag(a) << " " << fmt(drift) << "\n";
    }
    sink.write_text("trajectory_a" + tag(a) + ".csv", trajectory);
  }
  sink.write_text("evolve_report.txt", report.str());
  return finish(sink, status, log);
}

int cmd_sweep(const ScenarioConfig& c, const RunOptions& o, std::ostream& log) {
  const StateSpec& state = require_state(c);
  if (!c.model || !std::holds_alternative<PhaseInsensitive>(*c.model))
    fail(ErrorKind::Config, "sweep needs a phase-insensitive 'model'");
  if (c.times.empty()) fail(ErrorKind::Config, "sweep needs 'times'");
  const double kappa = std::get<PhaseInsensitive>(*c.model).kappa;
  const PhaseSpaceGrid grid = resolve_grid(c);
  const TruncatedOperator rho0 = density_matrix(state, c.cutoff);
  IntegratorConfig ic;
  ic.dt = c.dt;
  ic.record_times = c.times;
  const std::vector<Snapshot> snapshots = integrate(*c.model, rho0, ic);
  OutputSink sink = make_sink(c, o);

  int status = 0;
  std::ostringstream report;
  for (double a : orders_of(c)) {
    const OrderingParameter order(a);
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      const double t = c.times[i];
      const OrderingParameter swept = sweep_order(order, kappa, t);
      const DistributionField predicted = evaluate_grid(rho0, swept, grid, describe(state), EvalOptions{});
      const DistributionField oracle =
          evaluate_grid(snapshots[i].rho, order, grid, describe(state) + " (lindblad)", EvalOptions{});
      const double diff = max_abs_diff(predicted, oracle);
      nlohmann::json extra = {{"time", t}, {"swept_order", swept.value()}, {"max_abs_diff", diff}};
      std::string line = "t=" + tag(t) + " a=" + tag(a) + " swept=" + tag(swept.value()) + " max_abs_diff=" + fmt(diff);
      if (has_closed_form(state)) {
        EvalOptions opt;
        opt.enforce_coverage = false;
        const double closed = max_abs_diff(evaluate_grid(state, swept, grid, EvalMethod::ClosedForm, opt), oracle);
        extra["closed_form_max_abs_diff"] = closed;
        line += " closed_form_max_abs_diff=" + fmt(closed);
      }
      const bool ok = diff < kOracleTolerance;
      line += ok ? " ok" : " FAIL";
      if (!ok) status = 1;
      sink.write_field("sweep_t" + tag(t) + "_a" + tag(a) + "_predicted.csv", predicted, extra);
      sink.write_field("sweep_t" + tag(t) + "_a" + tag(a) + "_oracle.csv", oracle, extra);
      report << line << "\n";
      log << line << "\n";
    }
  }
  sink.write_text("sweep_report.txt", report.str());
  return finish(sink, status, log);
}

int cmd_verify(const ScenarioConfig& c, const RunOptions& o, std::ostream& log) {
  const std::string suite = !o.suite.empty() ? o.suite : (!c.suite.empty() ? c.suite : "all");
  const std::vector<CheckResult> results = run_suite(suite);
  OutputSink sink = make_sink(c, o);
  std::ostringstream report;
  int failures = 0;
  for (const CheckResult& r : results) {
    char line[512];
    std::snprintf(line, sizeof line, "%s %-10s %-44s value=%.3e tol=%.1e%s%s\n", r.passed ? "PASS" : "FAIL",
                  r.suite.c_str(), r.name.c_str(), r.value, r.tolerance, r.detail.empty() ? "" : " ",
                  r.detail.c_str());
    report << line;
    log << line;
    if (!r.passed) ++failures;
  }
  report << "summary " << results.size() - failures << "/" << results.size() << " passed\n";
  log << "summary " << results.size() - failures << "/" << results.size() << " passed\n";
  sink.write_text("verify_" + suite + ".txt", report.str());
  return finish(sink, failures == 0 ? 0 : 1, log);
}

}  // namespace phasespace::cli
