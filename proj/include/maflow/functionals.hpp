#pragma once

// Energy functionals on the space of potentials u with chi_u > 0.
//
// With m = n - alpha, the line-path formula
//   J_alpha(u) = 1/(m+1) sum_{i=0}^{m} int u chi_u^i ^ chi^{m-i} ^ omega^alpha
// is path independent only when chi is closed, so every functional here takes a
// ClosedForm, which can only be obtained by verifying closedness numerically.

#include <utility>

#include "maflow/fields.hpp"

namespace maflow {

class ClosedForm {
 public:
  /// Throws DomainError when closedness_defect(chi) exceeds kClosednessTolerance.
  static ClosedForm verify(HermitianField chi);

  const HermitianField& field() const { return chi_; }

 private:
  explicit ClosedForm(HermitianField chi) : chi_(std::move(chi)) {}
  HermitianField chi_;
};

struct FunctionalReport {
  Eigen::VectorXd J_alpha;  // index alpha - 1, alpha = 1..n
  double J = 0.0;
  double I = 0.0;
  double Jhat = 0.0;
  double c = 0.0;
  double properness_pairing = 0.0;
  double tilde_shift = 0.0;
  double hat_shift = 0.0;
  double volume = 1.0;  // int omega^n, for per-volume normalization
};

/// c = int chi^n / sum_a b_a int chi^{n-a} ^ omega^a.
double invariant_c(const HermitianField& chi, const BackgroundMetric& g, const Coefficients<double>& coeff);

/// sum_a b_a int chi^{n-a} ^ omega^a.
double weighted_class_volume(const HermitianField& chi, const BackgroundMetric& g, const Coefficients<double>& coeff);

/// alpha = 0 gives I.
double J_alpha(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g, int alpha);
double J_total(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g,
               const Coefficients<double>& coeff);
double I_functional(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g);
/// sum_a b_a J_a - I / c, the functional whose gradient flow is the generalized J-flow.
double Jhat(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g, const Coefficients<double>& coeff);

/// (u - mean, mean) with mean = int u omega^n / int omega^n.
std::pair<ScalarField, double> normalize_tilde(const ScalarField& u, const BackgroundMetric& g);
/// (u - J(u)/sum_a b_a int chi^{n-a} ^ omega^a, that shift).
std::pair<ScalarField, double> normalize_hat(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g,
                                             const Coefficients<double>& coeff);

/// int u (chi^n - chi_u^n).
double properness_pairing(const ScalarField& u, const HermitianField& chi, const BackgroundMetric& g);

/// All of the above from a single pass over the mixed discriminants of (chi_u, chi).
FunctionalReport functional_report(const ScalarField& u, const ClosedForm& chi, const BackgroundMetric& g,
                                   const Coefficients<double>& coeff);
/// Same, reusing chi_u = chi + d dbar u when the caller already has it.
FunctionalReport functional_report(const ScalarField& u, const HermitianField& chi_u, const ClosedForm& chi,
                                   const BackgroundMetric& g, const Coefficients<double>& coeff);

}  // namespace maflow
