#pragma once

#include "maflow/grid.hpp"

namespace maflow {

/// Eigenvalues (ascending) of a small Hermitian matrix. Closed form for n = 2,
/// trigonometric cubic for n = 3, Eigen's self-adjoint solver otherwise.
PointSpectrum hermitian_eigenvalues(const PointMatrix& a);

/// Eigenvalues of g^{-1} X via the Cholesky-reduced pencil.
PointSpectrum relative_eigenvalues(const PointMatrix& x, const BackgroundMetric& g);

/// Real determinant of a Hermitian matrix.
double hermitian_determinant(const PointMatrix& a);

}  // namespace maflow
