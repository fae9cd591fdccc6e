#pragma once

// Fourier pseudospectral derivatives on the torus grid.

#include <unsupported/Eigen/FFT>

#include <vector>

#include "maflow/grid.hpp"

namespace maflow {

class SpectralTransform {
 public:
  explicit SpectralTransform(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }

  std::vector<Complex> forward(const ScalarField& f) const;
  std::vector<Complex> forward(std::vector<Complex> data) const;
  std::vector<Complex> inverse(std::vector<Complex> spectrum) const;

  /// Angular wavenumber of mode index j; the Nyquist mode maps to 0.
  double first_wavenumber(int j) const { return k1_[static_cast<std::size_t>(j)]; }
  /// Angular wavenumber with the Nyquist mode kept, used for pure second derivatives.
  double second_wavenumber(int j) const { return k2_[static_cast<std::size_t>(j)]; }

  /// Fourier multiplier of d/dz_i at a flat mode index.
  Complex dz_multiplier(std::size_t mode, int i) const;
  /// Fourier multiplier of d^2/(dz_i dzbar_j) at a flat mode index.
  Complex hessian_multiplier(std::size_t mode, int i, int j) const;

 private:
  void transform(std::vector<Complex>& data, bool inverse) const;

  TorusGrid grid_;
  std::vector<double> k1_;
  std::vector<double> k2_;
  std::vector<int> digit_stride_;
};

/// H_{i jbar} = d^2 u / (dz_i dzbar_j) at every grid point.
HermitianField complex_hessian(const ScalarField& u);

/// The n complex first derivatives du/dz_i, one field per index.
std::vector<Eigen::VectorXcd> complex_gradient(const ScalarField& u);

/// Real partial derivative along one of the 2n axes.
ScalarField axis_derivative(const ScalarField& u, int axis);

}  // namespace maflow
