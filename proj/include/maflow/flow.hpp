#pragma once

// Explicit time integration of the two parabolic flows
//
//   log-quotient:    du/dt = ln S_n(X) - ln sum_a c_a S_{n-a}(X) - ln psi
//   generalized J:   du/dt = 1/c - sum_a c_a S_a(X^{-1})
//
// with X = chi + d dbar u and eigenvalues taken relative to the background g.

#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "maflow/fields.hpp"

namespace maflow {

enum class FlowKind { LogQuotient, GeneralizedJ };

struct FlowConfig {
  Coefficients<double> coeff;
  FlowKind kind = FlowKind::LogQuotient;
  ScalarField psi;
  HermitianField chi;
  BackgroundMetric g;
  double c = 0.0;  // invariant constant, filled in by prepare()
  double dt_init = 1e-2;
  double dt_max = 1.0;
  double safety = 0.4;
  double t_max = 100.0;
  double residual_tol = 1e-6;
  int record_every = 1;
  std::size_t max_steps = std::numeric_limits<std::size_t>::max();
  bool compute_functionals = true;

  /// Checks the invariants (psi > 0, chi > 0, 0 < dt_init <= dt_max, 0 < safety < 1)
  /// and computes c. Throws ArgumentError or DomainError.
  void prepare();
  bool prepared() const { return c > 0.0; }
};

struct FlowState {
  double t = 0.0;
  std::size_t steps = 0;
  ScalarField u;
  HermitianField X;
  ScalarField dtu;
  ScalarField top;       // S_n(X) = chi_u^n / omega^n
  ScalarField lower;     // sum_a c_a S_{n-a}(X) = sum_a b_a chi_u^{n-a} ^ omega^a / omega^n
  ScalarField quotient;  // S_n / (psi sum_a c_a S_{n-a})
  double margin = 0.0;
  double max_gradient = 0.0;  // largest d(speed)/d lambda_i over the grid
  std::pair<double, double> dtu_initial_range{0.0, 0.0};
  std::pair<double, double> quotient_initial_range{0.0, 0.0};
};

struct StepReport {
  double dt = 0.0;
  int rejections = 0;
  double margin = 0.0;
  double rhs_min = 0.0;
  double rhs_max = 0.0;
};

struct DiagnosticsRecord {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double osc_u = 0.0;
  double osc_dtu = 0.0;
  double dtu_min = 0.0;
  double dtu_max = 0.0;
  double J = 0.0;
  double I = 0.0;
  double Jhat = 0.0;
  double c = 0.0;
  double residual = 0.0;   // sup |dtu - mean dtu|
  double b_running = 0.0;  // mean dtu
  double min_margin = 0.0;
  double w_max = 0.0;
  double gradnorm_max = 0.0;
  double properness_pairing = 0.0;
  double tilde_shift = 0.0;
  double hat_shift = 0.0;
  double quotient_min = 0.0;
  double quotient_max = 0.0;
  double i_flux = 0.0;  // trapezoidal int_0^t int dtu chi_u^n
  double j_flux = 0.0;  // trapezoidal int_0^t int dtu sum_a b_a chi_u^{n-a} ^ omega^a
  double u_min = 0.0;
  double u_max = 0.0;
  bool max_principle_ok = true;
  double max_principle_violation = 0.0;
};

enum class Termination { Converged, TimeLimit, StepLimit };

struct RunResult {
  FlowState state;
  std::vector<DiagnosticsRecord> records;
  Termination termination = Termination::TimeLimit;
};

using RecordObserver = std::function<void(const DiagnosticsRecord&, const FlowState&)>;

/// State at potential u and time t; the t = 0 envelopes are taken from this state.
FlowState make_state(const FlowConfig& config, ScalarField u, double t = 0.0);
/// u(x, 0) = 0.
FlowState initial_state(const FlowConfig& config);

ScalarField rhs_log(const FlowState& state, const FlowConfig& config);
ScalarField rhs_jflow(const FlowState& state, const FlowConfig& config);

/// One midpoint Runge-Kutta step with reject-and-halve on loss of admissibility.
std::pair<FlowState, StepReport> step(const FlowState& state, const FlowConfig& config, double dt);

/// Parabolic step limit safety h^2 / (n max_gradient |g^{-1}|), clamped to dt_max.
double stable_dt(const FlowState& state, const FlowConfig& config);

RunResult run(FlowConfig config, const RecordObserver& observer = {});

struct MonitorResult {
  bool ok = true;
  double violation = 0.0;
};

/// Is the current range of du/dt inside its t = 0 range, widened by 1e-8 (1 + width)?
MonitorResult maximum_principle_monitor(const FlowState& state);
/// Same containment test for the quotient S_n / (psi sum_a c_a S_{n-a}).
MonitorResult quotient_envelope_monitor(const FlowState& state);

}  // namespace maflow
