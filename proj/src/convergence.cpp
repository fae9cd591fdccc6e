#include "maflow/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maflow/errors.hpp"
#include "maflow/functionals.hpp"

namespace maflow {

double oscillation(const ScalarField& f) {
  if (f.size() == 0) return 0.0;
  return f.max() - f.min();
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series) {
  const double floor = 1e2 * std::numeric_limits<double>::epsilon();
  std::vector<std::pair<double, double>> kept;
  for (std::size_t k = series.size() / 2; k < series.size(); ++k) {
    const auto [t, o] = series[k];
    if (std::isfinite(t) && std::isfinite(o) && o > 0.0 && o >= floor) kept.emplace_back(t, std::log(o));
  }
  if (kept.size() < 10) throw FitError("fit_decay: fewer than 10 usable samples in the trailing half");

  const double m = static_cast<double>(kept.size());
  double st = 0.0, sy = 0.0;
  for (const auto& [t, y] : kept) {
    st += t;
    sy += y;
  }
  const double tbar = st / m;
  const double ybar = sy / m;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (const auto& [t, y] : kept) {
    stt += (t - tbar) * (t - tbar);
    sty += (t - tbar) * (y - ybar);
    syy += (y - ybar) * (y - ybar);
  }
  if (!(stt > 0.0)) throw FitError("fit_decay: all samples share one time");

  const double slope = sty / stt;
  const double intercept = ybar - slope * tbar;
  double ss_res = 0.0;
  for (const auto& [t, y] : kept) {
    const double r = y - (intercept + slope * t);
    ss_res += r * r;
  }

  DecayFit fit;
  fit.c0 = -slope;
  fit.prefactor = std::exp(intercept);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.window = {kept.front().first, kept.back().first};
  fit.samples = kept.size();
  fit.decaying = fit.c0 > 1e-12;
  return fit;
}

LimitReport limit_report(const FlowState& state, const FlowConfig& config, Termination termination) {
  if (termination != Termination::Converged) throw StateError("limit_report: the run did not reach the residual criterion");
  if (!config.prepared()) throw StateError("limit_report: configuration has not been prepared");

  LimitReport report;
  report.b_estimate = state.dtu.mean();
  report.residual_sup = (state.dtu.values.array() - report.b_estimate).abs().maxCoeff();
  report.osc_final = oscillation(state.dtu);
  report.u_infty = normalize_tilde(state.u, config.g).first;

  // The elliptic system only sees chi + d dbar u, so the shifted potential has the
  // same log-residual as u itself; recompute it from the shifted field anyway.
  const ScalarField shifted(report.u_infty.grid, report.u_infty.values.array() - report.u_infty.max());
  FlowConfig log_config = config;
  log_config.kind = FlowKind::LogQuotient;
  const ScalarField rhs = rhs_log(make_state(log_config, shifted, state.t), log_config);
  report.elliptic_residual = (rhs.values.array() - report.b_estimate).abs().maxCoeff();
  return report;
}

}  // namespace maflow
