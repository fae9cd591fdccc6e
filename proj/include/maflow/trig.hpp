#pragma once

// Real trigonometric polynomials on the torus, used to specify potentials and
// perturbations with exactly known derivatives.

#include <vector>

#include "maflow/grid.hpp"

namespace maflow {

struct TrigMode {
  enum class Kind { Cos, Sin };

  double amplitude = 0.0;
  std::vector<int> wavevector;  // one integer per real axis (x_1, y_1, ..., x_n, y_n)
  Kind kind = Kind::Cos;
};

struct TrigPolynomial {
  double constant = 0.0;
  std::vector<TrigMode> modes;

  /// Largest |k| over all modes and axes.
  int max_wavenumber() const;

  ScalarField sample(const TorusGrid& grid) const;
  /// Exact d^2/(dz_i dzbar_j) sampled on the grid.
  HermitianField hessian(const TorusGrid& grid) const;
  /// Exact du/dz_i sampled on the grid.
  std::vector<Eigen::VectorXcd> gradient(const TorusGrid& grid) const;
};

}  // namespace maflow
