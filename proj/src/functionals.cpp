#include "maflow/functionals.hpp"

#include <string>

#include "maflow/errors.hpp"

namespace maflow {

ClosedForm ClosedForm::verify(HermitianField chi) {
  const double defect = closedness_defect(chi);
  if (!(defect <= kClosednessTolerance))
    throw DomainError("chi is not closed (defect " + std::to_string(defect) + "); functionals need d chi = 0");
  return ClosedForm(std::move(chi));
}

namespace {

void check_coefficients(const Coefficients<double>& coeff, const BackgroundMetric& g) {
  if (coeff.n != g.n()) throw ArgumentError("coefficient and metric dimensions differ");
}

// int u chi_u^i ^ chi^{m-i} ^ omega^alpha, summed over i and divided by m + 1.
double line_formula(const ScalarField& u, const MixedDiscriminantTable& table, const BackgroundMetric& g, int alpha) {
  const int n = table.n();
  const int m = n - alpha;
  double total = 0.0;
  for (int i = 0; i <= m; ++i) {
    const ScalarField w = table.wedge(i, m - i);
    total += integrate(ScalarField(u.grid, u.values.cwiseProduct(w.values)), g);
  }
  return total / (m + 1);
}

MixedDiscriminantTable table_for(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g) {
  const HermitianField chi_u = chi.field() + complex_hessian(u);
  return MixedDiscriminantTable(chi_u, chi.field(), g);
}

}  // namespace

double weighted_class_volume(const HermitianField& chi, const BackgroundMetric& g, const Coefficients<double>& coeff) {
  check_coefficients(coeff, g);
  const SpectrumField spectra = eigenvalues_rel(chi, g);
  const int n = coeff.n;
  ScalarField lower(chi.grid);
  for (std::size_t p = 0; p < chi.size(); ++p) {
    const auto e = elementary_symmetric(spectra.at(p));
    double s = 0.0;
    for (int a = 1; a <= n; ++a) s += coeff.b_at(a) * e(n - a) / binomial(n, n - a);
    lower[p] = s;
  }
  return integrate(lower, g);
}

double invariant_c(const HermitianField& chi, const BackgroundMetric& g, const Coefficients<double>& coeff) {
  check_coefficients(coeff, g);
  const SpectrumField spectra = eigenvalues_rel(chi, g);
  if (!(spectra.values.col(0).minCoeff() > 0.0)) throw DomainError("invariant_c: chi is not positive");
  const int n = coeff.n;
  ScalarField top(chi.grid), lower(chi.grid);
  for (std::size_t p = 0; p < chi.size(); ++p) {
    const auto e = elementary_symmetric(spectra.at(p));
    top[p] = e(n);
    double s = 0.0;
    for (int a = 1; a <= n; ++a) s += coeff.b_at(a) * e(n - a) / binomial(n, n - a);
    lower[p] = s;
  }
  const double denominator = integrate(lower, g);
  if (!(denominator > 0.0)) throw DomainError("invariant_c: denominator is not positive");
  return integrate(top, g) / denominator;
}

double J_alpha(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g, int alpha) {
  if (alpha < 0 || alpha > g.n()) throw ArgumentError("J_alpha: alpha out of range");
  return line_formula(u, table_for(u, chi, g), g, alpha);
}

double J_total(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g,
               const Coefficients<double>& coeff) {
  check_coefficients(coeff, g);
  const MixedDiscriminantTable table = table_for(u, chi, g);
  double total = 0.0;
  for (int a = 1; a <= coeff.n; ++a)
    if (coeff.b_at(a) != 0.0) total += coeff.b_at(a) * line_formula(u, table, g, a);
  return total;
}

double I_functional(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g) {
  return J_alpha(u, chi, g, 0);
}

double Jhat(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g, const Coefficients<double>& coeff) {
  return functional_report(u, chi, g, coeff).Jhat;
}

std::pair<ScalarField, double> normalize_tilde(const ScalarField& u, const BackgroundMetric& g) {
  const double shift = integrate(u, g) / volume(u.grid, g);
  return {ScalarField(u.grid, u.values.array() - shift), shift};
}

std::pair<ScalarField, double> normalize_hat(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g,
                                             const Coefficients<double>& coeff) {
  const double shift = J_total(u, chi, g, coeff) / weighted_class_volume(chi.field(), g, coeff);
  return {ScalarField(u.grid, u.values.array() - shift), shift};
}

double properness_pairing(const ScalarField& u, const HermitianField& chi, const BackgroundMetric& g) {
  const int n = g.n();
  const ScalarField base = wedge_ratio(chi, g, n);
  const ScalarField moved = wedge_ratio(chi + complex_hessian(u), g, n);
  return integrate(ScalarField(u.grid, u.values.cwiseProduct(base.values - moved.values)), g);
}

FunctionalReport functional_report(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g,
                                   const Coefficients<double>& coeff) {
  return functional_report(u, chi.field() + complex_hessian(u), chi, g, coeff);
}

FunctionalReport functional_report(const ScalarField& u, const HermitianField& chi_u, const ClosedForm& chi,
                                   const BackgroundMetric& g, const Coefficients<double>& coeff) {
  check_coefficients(coeff, g);
  if (!(chi_u.grid == u.grid) || !(chi.field().grid == u.grid)) throw ArgumentError("functional_report: grid mismatch");
  const int n = coeff.n;
  const MixedDiscriminantTable table(chi_u, chi.field(), g);

  FunctionalReport r;
  r.volume = volume(u.grid, g);
  r.J_alpha.resize(n);
  for (int a = 1; a <= n; ++a) r.J_alpha(a - 1) = line_formula(u, table, g, a);
  r.I = line_formula(u, table, g, 0);
  r.J = 0.0;
  for (int a = 1; a <= n; ++a) r.J += coeff.b_at(a) * r.J_alpha(a - 1);

  // chi^{n-a} ^ omega^a is the (0, n-a) entry of the table
  const double top = integrate(table.wedge(0, n), g);
  double lower = 0.0;
  for (int a = 1; a <= n; ++a) lower += coeff.b_at(a) * integrate(table.wedge(0, n - a), g);
  if (!(lower > 0.0)) throw DomainError("functional_report: weighted class volume is not positive");
  r.c = top / lower;
  r.Jhat = r.J - r.I / r.c;

  const ScalarField base = table.wedge(0, n);
  const ScalarField moved = table.wedge(n, 0);
  r.properness_pairing = integrate(ScalarField(u.grid, u.values.cwiseProduct(base.values - moved.values)), g);
  r.tilde_shift = integrate(u, g) / r.volume;
  r.hat_shift = r.J / lower;
  return r;
}

}  // namespace maflow
