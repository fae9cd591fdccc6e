#include "maflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "maflow/errors.hpp"
#include "maflow/functionals.hpp"
#include "maflow/parallel.hpp"

namespace maflow {

namespace {

constexpr int kMaxRejections = 20;
constexpr double kDtGrowth = 2.0;

struct PointValues {
  double rhs = 0.0;
  double top = 0.0;
  double lower = 0.0;
  double gradient = 0.0;
};

PointValues log_point(const PointSpectrum& lambda, double psi, const Coefficients<double>& coeff) {
  const int n = coeff.n;
  const auto e = elementary_symmetric(lambda);
  PointValues v;
  v.top = e(n);
  v.lower = weighted_lower_sum(e, coeff);
  v.rhs = std::log(v.top) - std::log(v.lower) - std::log(psi);
  v.gradient = operator_gradient(lambda, coeff).cwiseAbs().maxCoeff();
  return v;
}

// speed 1/c - sum_a c_a S_a(mu), mu = 1/lambda; d/dlambda_i = sum_a c_a S_{a-1;i}(mu) / lambda_i^2
PointValues jflow_point(const PointSpectrum& lambda, double c, const Coefficients<double>& coeff) {
  const int n = coeff.n;
  const auto e = elementary_symmetric(lambda);
  const PointSpectrum mu = lambda.cwiseInverse();
  PointValues v;
  v.top = e(n);
  v.lower = weighted_lower_sum(e, coeff);
  v.rhs = 1.0 / c - v.lower / v.top;
  for (int i = 0; i < n; ++i) {
    const auto ei = detail::symmetric_table_skipping(mu, i, -1);
    double d = 0.0;
    for (int a = 1; a <= n; ++a) d += coeff.c_at(a) * ei(a - 1);
    v.gradient = std::max(v.gradient, d / (lambda(i) * lambda(i)));
  }
  return v;
}

// Fills everything in the state that is determined by u.
FlowState evaluate(const FlowConfig& config, ScalarField u, double t) {
  if (!config.prepared()) throw StateError("flow configuration has not been prepared");
  FlowState s;
  s.t = t;
  s.X = config.chi + complex_hessian(u);
  s.u = std::move(u);
  const SpectrumField spectra = eigenvalues_rel(s.X, config.g);

  const std::size_t points = s.X.size();
  s.dtu = ScalarField(s.X.grid);
  s.top = ScalarField(s.X.grid);
  s.lower = ScalarField(s.X.grid);
  s.quotient = ScalarField(s.X.grid);
  Eigen::VectorXd gradient(static_cast<Eigen::Index>(points));

  Eigen::Index worst = 0;
  s.margin = spectra.values.col(0).minCoeff(&worst);
  if (!(s.margin > kConeFloor))
    throw AdmissibilityError("chi_u left the positive cone (margin " + std::to_string(s.margin) + ")",
                             static_cast<std::size_t>(worst), s.margin);

  parallel_for(points, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const PointSpectrum lambda = spectra.at(p);
      const PointValues v = config.kind == FlowKind::LogQuotient ? log_point(lambda, config.psi[p], config.coeff)
                                                                  : jflow_point(lambda, config.c, config.coeff);
      s.dtu[p] = v.rhs;
      s.top[p] = v.top;
      s.lower[p] = v.lower;
      s.quotient[p] = v.top / (config.psi[p] * v.lower);
      gradient(static_cast<Eigen::Index>(p)) = v.gradient;
    }
  });
  if (!s.dtu.all_finite()) throw AdmissibilityError("flow speed is not finite", 0, s.margin);
  s.max_gradient = gradient.maxCoeff();
  return s;
}

std::pair<double, double> range_of(const ScalarField& f) { return {f.min(), f.max()}; }

MonitorResult containment(const ScalarField& f, std::pair<double, double> envelope) {
  const double tol = 1e-8 * (1.0 + (envelope.second - envelope.first));
  MonitorResult r;
  r.violation = std::max({0.0, envelope.first - f.min(), f.max() - envelope.second});
  r.ok = r.violation <= tol;
  return r;
}

ScalarField speed_from(const FlowState& state, const FlowConfig& config, FlowKind kind) {
  if (!config.prepared()) throw StateError("flow configuration has not been prepared");
  FlowConfig local = config;
  local.kind = kind;
  return evaluate(local, state.u, state.t).dtu;
}

}  // namespace

void FlowConfig::prepare() {
  if (coeff.n != g.n() || chi.n() != g.n()) throw ArgumentError("flow configuration: dimension mismatch");
  if (!(dt_init > 0.0) || !(dt_max >= dt_init)) throw ArgumentError("flow configuration: need 0 < dt_init <= dt_max");
  if (!(safety > 0.0 && safety < 1.0)) throw ArgumentError("flow configuration: safety must lie in (0, 1)");
  if (!(t_max > 0.0)) throw ArgumentError("flow configuration: t_max must be positive");
  if (!(residual_tol > 0.0)) throw ArgumentError("flow configuration: residual_tol must be positive");
  if (record_every < 1) throw ArgumentError("flow configuration: record_every must be at least 1");
  if (!(positivity_margin(chi, g) > 0.0)) throw DomainError("flow configuration: chi is not positive");
  c = invariant_c(chi, g, coeff);
  if (psi.size() == 0 && kind == FlowKind::GeneralizedJ) psi = ScalarField::constant(chi.grid, c);
  if (!(psi.grid == chi.grid)) throw ArgumentError("flow configuration: psi and chi live on different grids");
  if (!psi.all_finite() || !(psi.min() > 0.0)) throw DomainError("flow configuration: psi must be positive");
}

FlowState make_state(const FlowConfig& config, ScalarField u, double t) {
  if (!(u.grid == config.chi.grid)) throw ArgumentError("make_state: grid mismatch");
  FlowState s = evaluate(config, std::move(u), t);
  s.dtu_initial_range = range_of(s.dtu);
  s.quotient_initial_range = range_of(s.quotient);
  return s;
}

FlowState initial_state(const FlowConfig& config) { return make_state(config, ScalarField(config.chi.grid), 0.0); }

ScalarField rhs_log(const FlowState& state, const FlowConfig& config) {
  return speed_from(state, config, FlowKind::LogQuotient);
}

ScalarField rhs_jflow(const FlowState& state, const FlowConfig& config) {
  return speed_from(state, config, FlowKind::GeneralizedJ);
}

std::pair<FlowState, StepReport> step(const FlowState& state, const FlowConfig& config, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("step: dt must be positive and finite");
  StepReport report;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    try {
      const FlowState mid = evaluate(config, state.u + (0.5 * dt) * state.dtu, state.t + 0.5 * dt);
      FlowState next = evaluate(config, state.u + dt * mid.dtu, state.t + dt);
      next.steps = state.steps + 1;
      next.dtu_initial_range = state.dtu_initial_range;
      next.quotient_initial_range = state.quotient_initial_range;
      report.dt = dt;
      report.margin = next.margin;
      report.rhs_min = next.dtu.min();
      report.rhs_max = next.dtu.max();
      return {std::move(next), report};
    } catch (const AdmissibilityError&) {
      ++report.rejections;
      dt *= 0.5;
    }
  }
  throw StiffnessError("step rejected " + std::to_string(kMaxRejections) + " times at t = " + std::to_string(state.t));
}

double stable_dt(const FlowState& state, const FlowConfig& config) {
  if (!(state.max_gradient > 0.0)) return config.dt_max;
  const double h = state.u.grid.spacing();
  const double dt = config.safety * h * h / (config.g.n() * state.max_gradient * config.g.inverse_norm());
  return std::min(dt, config.dt_max);
}

MonitorResult maximum_principle_monitor(const FlowState& state) {
  return containment(state.dtu, state.dtu_initial_range);
}

MonitorResult quotient_envelope_monitor(const FlowState& state) {
  return containment(state.quotient, state.quotient_initial_range);
}

RunResult run(FlowConfig config, const RecordObserver& observer) {
  config.prepare();
  RunResult result;
  FlowState state = initial_state(config);

  std::optional<ClosedForm> closed;
  if (config.compute_functionals) {
    try {
      closed = ClosedForm::verify(config.chi);
    } catch (const DomainError&) {
    }
  }

  double i_flux = 0.0;
  double j_flux = 0.0;
  auto record = [&](const FlowState& s, double dt) {
    DiagnosticsRecord r;
    r.step = s.steps;
    r.t = s.t;
    r.dt = dt;
    r.osc_u = s.u.max() - s.u.min();
    r.dtu_min = s.dtu.min();
    r.dtu_max = s.dtu.max();
    r.osc_dtu = r.dtu_max - r.dtu_min;
    r.b_running = s.dtu.mean();
    r.residual = (s.dtu.values.array() - r.b_running).abs().maxCoeff();
    r.min_margin = s.margin;
    r.w_max = trace_rel(s.X, config.g).max();
    r.gradnorm_max = gradient_norm(s.u, config.g).max();
    r.c = config.c;
    if (closed) {
      const FunctionalReport f = functional_report(s.u, s.X, *closed, config.g, config.coeff);
      r.J = f.J;
      r.I = f.I;
      r.Jhat = f.Jhat;
      r.properness_pairing = f.properness_pairing;
      r.tilde_shift = f.tilde_shift;
      r.hat_shift = f.hat_shift;
    } else {
      r.J = r.I = r.Jhat = r.properness_pairing = r.hat_shift = std::nan("");
      r.tilde_shift = integrate(s.u, config.g) / volume(s.u.grid, config.g);
    }
    r.quotient_min = s.quotient.min();
    r.quotient_max = s.quotient.max();
    r.i_flux = i_flux;
    r.j_flux = j_flux;
    r.u_min = s.u.min();
    r.u_max = s.u.max();
    const MonitorResult mp = maximum_principle_monitor(s);
    r.max_principle_ok = mp.ok;
    r.max_principle_violation = mp.violation;
    if (observer) observer(r, s);
    result.records.push_back(r);
  };

  record(state, 0.0);
  bool recorded_last = true;
  double dt_prev = config.dt_init;
  bool first = true;
  for (;;) {
    if (state.dtu.max() - state.dtu.min() < config.residual_tol) {
      result.termination = Termination::Converged;
      break;
    }
    const double remaining = config.t_max - state.t;
    if (remaining <= 1e-12 * std::max(1.0, config.t_max)) {
      result.termination = Termination::TimeLimit;
      break;
    }
    if (state.steps >= config.max_steps) {
      result.termination = Termination::StepLimit;
      break;
    }
    double dt = stable_dt(state, config);
    dt = first ? std::min(dt, config.dt_init) : std::min(dt, kDtGrowth * dt_prev);
    dt = std::min(dt, remaining);
    first = false;

    auto [next, report] = step(state, config, dt);
    const double before_i = integrate(ScalarField(state.u.grid, state.dtu.values.cwiseProduct(state.top.values)), config.g);
    const double after_i = integrate(ScalarField(next.u.grid, next.dtu.values.cwiseProduct(next.top.values)), config.g);
    const double before_j =
        integrate(ScalarField(state.u.grid, state.dtu.values.cwiseProduct(state.lower.values)), config.g);
    const double after_j = integrate(ScalarField(next.u.grid, next.dtu.values.cwiseProduct(next.lower.values)), config.g);
    i_flux += 0.5 * report.dt * (before_i + after_i);
    j_flux += 0.5 * report.dt * (before_j + after_j);
    dt_prev = report.dt;
    state = std::move(next);

    recorded_last = state.steps % static_cast<std::size_t>(config.record_every) == 0;
    if (recorded_last) record(state, report.dt);
  }
  if (!recorded_last) record(state, dt_prev);
  result.state = std::move(state);
  return result;
}

}  // namespace maflow
