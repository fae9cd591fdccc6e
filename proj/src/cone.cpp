#include "maflow/cone.hpp"

#include <cmath>
#include <limits>

#include "maflow/errors.hpp"
#include "maflow/functionals.hpp"

namespace maflow {

namespace {

void check_inputs(const HermitianField& chi, const ScalarField& psi, const BackgroundMetric& g,
                  const Coefficients<double>& coeff) {
  if (!(chi.grid == psi.grid)) throw ArgumentError("chi and psi live on different grids");
  if (coeff.n != g.n() || chi.n() != g.n()) throw ArgumentError("dimension mismatch");
  if (!(psi.min() > 0.0)) throw DomainError("psi must be positive");
}

}  // namespace

ConeReport cone_check(const HermitianField& chi_v, const ScalarField& psi, const BackgroundMetric& g,
                      const Coefficients<double>& coeff) {
  check_inputs(chi_v, psi, g, coeff);
  const SpectrumField spectra = eigenvalues_rel(chi_v, g);
  if (!(spectra.values.col(0).minCoeff() > 0.0)) throw DomainError("cone_check: chi_v is not positive");
  const int n = coeff.n;
  ConeReport report;
  report.margin = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < chi_v.size(); ++p) {
    const PointSpectrum lambda = spectra.at(p);
    for (int k = 0; k < n; ++k) {
      const auto e = detail::symmetric_table_skipping(lambda, k, -1);  // S_0..S_{n-1} of the minor
      double sum = 0.0;
      for (int a = 1; a <= n - 1; ++a) sum += coeff.c_at(a) * e(n - 1 - a) / e(n - 1);
      const double margin = 1.0 / psi[p] - sum;
      if (margin < report.margin) {
        report.margin = margin;
        report.worst_point = p;
        report.worst_minor = k;
      }
    }
  }
  report.holds = report.margin > kConeStrictness;
  report.boundary = report.margin > -kConeStrictness && report.margin <= kConeStrictness;
  return report;
}

HypothesisReport hermitian_degeneracy_check(const HermitianField& chi, const ScalarField& psi,
                                            const BackgroundMetric& g, const Coefficients<double>& coeff) {
  check_inputs(chi, psi, g, coeff);
  const SpectrumField spectra = eigenvalues_rel(chi, g);
  const int n = coeff.n;
  HypothesisReport report;
  report.slack = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < chi.size(); ++p) {
    const auto e = elementary_symmetric(spectra.at(p));
    const double rhs = psi[p] * weighted_lower_sum(e, coeff);
    const double slack = 1.0 - e(n) / rhs;
    if (slack < report.slack) {
      report.slack = slack;
      report.worst_point = p;
    }
  }
  report.holds = report.slack >= -1e-12;
  return report;
}

HypothesisReport psi_geq_c_check(const ScalarField& psi, const HermitianField& chi, const BackgroundMetric& g,
                                 const Coefficients<double>& coeff) {
  const double c = invariant_c(chi, g, coeff);
  HypothesisReport report;
  Eigen::Index idx = 0;
  report.slack = psi.values.minCoeff(&idx) - c;
  report.worst_point = static_cast<std::size_t>(idx);
  report.holds = report.slack >= -1e-12 * c;
  return report;
}

}  // namespace maflow
