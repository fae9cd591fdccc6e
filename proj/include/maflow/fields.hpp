#pragma once

// Pointwise geometry of Hermitian forms against the background metric, and
// integration of top-degree forms. Volume convention: omega^n = n! det(g) dV.

#include <vector>

#include "maflow/grid.hpp"
#include "maflow/spectral.hpp"

namespace maflow {

/// Per-point spectra of g^{-1} X, stored as a points x n matrix (ascending rows).
struct SpectrumField {
  TorusGrid grid;
  Eigen::MatrixXd values;

  PointSpectrum at(std::size_t p) const { return values.row(static_cast<Eigen::Index>(p)).transpose(); }
};

SpectrumField eigenvalues_rel(const HermitianField& x, const BackgroundMetric& g);

/// Discrete  int_M f omega^n.
double integrate(const ScalarField& f, const BackgroundMetric& g);

/// Discrete  int_M omega^n.
double volume(const TorusGrid& grid, const BackgroundMetric& g);

/// X^p ^ omega^{n-p} / omega^n = S_p(lambda) / C(n, p).
ScalarField wedge_ratio(const HermitianField& x, const BackgroundMetric& g, int p);

/// Coefficients D_{p,q} of s^p t^q in det(I + s g^{-1}A + t g^{-1}B) at every
/// point, stored as points x (n+1)^2 with column p * (n+1) + q.
class MixedDiscriminantTable {
 public:
  MixedDiscriminantTable(const HermitianField& a, const HermitianField& b, const BackgroundMetric& g);

  int n() const { return n_; }
  double at(std::size_t point, int p, int q) const {
    return table_(static_cast<Eigen::Index>(point), p * (n_ + 1) + q);
  }
  /// A^p ^ B^q ^ omega^{n-p-q} / omega^n as a field.
  ScalarField wedge(int p, int q) const;
  const TorusGrid& grid() const { return grid_; }

 private:
  TorusGrid grid_;
  int n_;
  Eigen::MatrixXd table_;
};

/// Mixed discriminants of a single pair of Hermitian matrices; exposed for
/// pointwise checks. Returns the (n+1) x (n+1) coefficient table.
Eigen::MatrixXd mixed_discriminants(const PointMatrix& a, const PointMatrix& b, const BackgroundMetric& g);

/// A^p ^ B^q ^ omega^{n-p-q} / omega^n pointwise.
ScalarField mixed_wedge_ratio(const HermitianField& a, const HermitianField& b, const BackgroundMetric& g, int p,
                              int q);

/// chi = chi0 + complex Hessian of rho.
HermitianField build_chi(const PointMatrix& chi0, const ScalarField& rho, const BackgroundMetric& g);

/// Smallest relative eigenvalue over the grid.
double positivity_margin(const HermitianField& x, const BackgroundMetric& g);

/// g^{i jbar} u_i u_jbar pointwise.
ScalarField gradient_norm(const ScalarField& u, const BackgroundMetric& g);

/// w = tr_g (chi + complex Hessian of u).
ScalarField trace_quantity_w(const ScalarField& u, const HermitianField& chi, const BackgroundMetric& g);

/// Trace of g^{-1} X pointwise.
ScalarField trace_rel(const HermitianField& x, const BackgroundMetric& g);

/// Largest violation of d chi = 0, i.e. max |d_k chi_{i jbar} - d_i chi_{k jbar}|
/// relative to 1 + max |chi|.
double closedness_defect(const HermitianField& chi);

/// chi is accepted as closed when closedness_defect is below this value.
inline constexpr double kClosednessTolerance = 1e-9;

}  // namespace maflow
