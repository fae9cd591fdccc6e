#pragma once

// Preflight hypotheses for the flows: the cone condition on a witness chi_v,
// the Hermitian degeneracy bound chi^n <= psi sum_a b_a chi^{n-a} ^ omega^a,
// and psi >= c.

#include <cstddef>

#include "maflow/fields.hpp"

namespace maflow {

/// Margins inside (-kConeStrictness, kConeStrictness] are reported as boundary.
inline constexpr double kConeStrictness = 1e-10;

struct ConeReport {
  bool holds = false;
  bool boundary = false;
  double margin = 0.0;
  std::size_t worst_point = 0;
  int worst_minor = 0;
};

struct HypothesisReport {
  bool holds = false;
  double slack = 0.0;
  std::size_t worst_point = 0;
};

/// Per point and minor index k: 1/psi - sum_{a=1}^{n-1} c_a S_a(mu^{-1}), where mu
/// are the eigenvalues of the g-pencil of chi_v with the k-th one removed.
ConeReport cone_check(const HermitianField& chi_v, const ScalarField& psi, const BackgroundMetric& g,
                      const Coefficients<double>& coeff);

/// Slack is min over points of 1 - S_n / (psi sum_a c_a S_{n-a}).
HypothesisReport hermitian_degeneracy_check(const HermitianField& chi, const ScalarField& psi,
                                            const BackgroundMetric& g, const Coefficients<double>& coeff);

/// Slack is min psi - c.
HypothesisReport psi_geq_c_check(const ScalarField& psi, const HermitianField& chi, const BackgroundMetric& g,
                                 const Coefficients<double>& coeff);

}  // namespace maflow
