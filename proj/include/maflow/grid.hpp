#pragma once

// Discrete flat torus (C^n / (period Z)^{2n}) and the fields that live on it.
//
// Real axes are ordered (x_1, y_1, ..., x_n, y_n) with z_i = x_i + i y_i, and
// grid points are stored row-major over that axis order, so y_n varies fastest.

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "maflow/symcalc.hpp"

namespace maflow {

using Complex = std::complex<double>;
using PointMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using PointSpectrum = Spectrum<double>;

struct TorusGrid {
  int n = 2;
  int resolution = 8;
  double period = 2.0 * std::numbers::pi;

  TorusGrid() = default;
  TorusGrid(int n_, int resolution_, double period_ = 2.0 * std::numbers::pi);

  int axes() const { return 2 * n; }
  std::size_t size() const;
  double spacing() const { return period / resolution; }
  /// Euclidean volume of one grid cell, spacing^(2n).
  double cell_volume() const;
  /// Coordinates (x_1, y_1, ..., x_n, y_n) of a flat point index.
  Eigen::VectorXd coordinates(std::size_t point) const;
  /// Integer grid index along each axis.
  Eigen::VectorXi multi_index(std::size_t point) const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;
};

struct ScalarField {
  TorusGrid grid;
  Eigen::VectorXd values;

  ScalarField() = default;
  explicit ScalarField(const TorusGrid& g) : grid(g), values(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()))) {}
  ScalarField(const TorusGrid& g, Eigen::VectorXd v);

  static ScalarField constant(const TorusGrid& g, double value);

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  double operator[](std::size_t p) const { return values(static_cast<Eigen::Index>(p)); }
  double& operator[](std::size_t p) { return values(static_cast<Eigen::Index>(p)); }

  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
  double mean() const { return values.mean(); }
  bool all_finite() const { return values.allFinite(); }
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

/// Per-point Hermitian n x n matrices: real diagonal plus the strictly lower
/// triangle, so Hermitian symmetry holds by construction.
struct HermitianField {
  TorusGrid grid;
  Eigen::MatrixXd diagonal;  // points x n
  Eigen::MatrixXcd lower;    // points x n(n-1)/2, entries (i, j) with i > j in row order

  HermitianField() = default;
  explicit HermitianField(const TorusGrid& g);

  static HermitianField constant(const TorusGrid& g, const PointMatrix& m);

  int n() const { return grid.n; }
  std::size_t size() const { return grid.size(); }
  static int lower_index(int i, int j) { return i * (i - 1) / 2 + j; }

  /// Entry (i, j) at a point, for any ordering of i and j.
  Complex entry(std::size_t p, int i, int j) const;
  PointMatrix at(std::size_t p) const;
  void set(std::size_t p, const PointMatrix& m);
};

HermitianField operator+(const HermitianField& a, const HermitianField& b);
HermitianField operator*(double s, const HermitianField& a);

/// Constant Hermitian positive matrix g_{i jbar} of the background form omega.
class BackgroundMetric {
 public:
  BackgroundMetric() : BackgroundMetric(PointMatrix::Identity(2, 2)) {}
  explicit BackgroundMetric(const PointMatrix& g);

  static BackgroundMetric identity(int n) { return BackgroundMetric(PointMatrix::Identity(n, n)); }

  int n() const { return static_cast<int>(g_.rows()); }
  const PointMatrix& matrix() const { return g_; }
  const PointMatrix& inverse() const { return inverse_; }
  /// Inverse of the Cholesky factor L, g = L L^*.
  const PointMatrix& cholesky_inverse() const { return l_inverse_; }
  double determinant() const { return det_; }
  /// Largest eigenvalue of g^{-1}.
  double inverse_norm() const { return inverse_norm_; }
  bool is_identity() const { return identity_; }

  /// L^{-1} X L^{-*}: a Hermitian matrix with the eigenvalues of g^{-1} X.
  PointMatrix reduce(const PointMatrix& x) const;

 private:
  PointMatrix g_;
  PointMatrix inverse_;
  PointMatrix l_inverse_;
  double det_ = 1.0;
  double inverse_norm_ = 1.0;
  bool identity_ = true;
};

}  // namespace maflow
