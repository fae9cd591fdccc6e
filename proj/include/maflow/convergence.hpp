#pragma once

// Post-processing of a finished run: oscillation, exponential decay fits and
// the limit (u_infty, b) of the normalized flow.

#include <utility>
#include <vector>

#include "maflow/flow.hpp"

namespace maflow {

struct DecayFit {
  double c0 = 0.0;         // fitted rate, O(t) ~ prefactor * exp(-c0 t)
  double prefactor = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  std::size_t samples = 0;
  bool decaying = false;
};

struct LimitReport {
  double b_estimate = 0.0;    // mean of the terminal right-hand side
  double residual_sup = 0.0;  // sup |rhs - b_estimate|
  ScalarField u_infty;        // final u minus its omega^n-mean
  double osc_final = 0.0;
  double elliptic_residual = 0.0;  // sup |ln chi_u^n - b - ln psi - ln sum_a b_a chi_u^{n-a} ^ omega^a| at u_infty - sup u_infty
};

/// sup - inf over the grid.
double oscillation(const ScalarField& f);

/// Least squares of ln O against t over the trailing half of the series. Samples
/// with O <= 0 or O < 1e2 * machine epsilon are dropped; fewer than 10 remaining
/// throws FitError.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series);

/// Requires a run that ended on the residual criterion (StateError otherwise).
LimitReport limit_report(const FlowState& state, const FlowConfig& config, Termination termination);

}  // namespace maflow
