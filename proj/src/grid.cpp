#include "maflow/grid.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "maflow/errors.hpp"

namespace maflow {

TorusGrid::TorusGrid(int n_, int resolution_, double period_) : n(n_), resolution(resolution_), period(period_) {
  if (n < 1 || n > kMaxDim) throw ArgumentError("TorusGrid: complex dimension out of range");
  if (resolution < 8 || (resolution & (resolution - 1)) != 0)
    throw ArgumentError("TorusGrid: resolution must be a power of two >= 8, got " + std::to_string(resolution));
  if (!(period > 0.0) || !std::isfinite(period)) throw ArgumentError("TorusGrid: period must be positive");
}

std::size_t TorusGrid::size() const {
  std::size_t total = 1;
  for (int a = 0; a < axes(); ++a) total *= static_cast<std::size_t>(resolution);
  return total;
}

double TorusGrid::cell_volume() const { return std::pow(spacing(), axes()); }

Eigen::VectorXi TorusGrid::multi_index(std::size_t point) const {
  Eigen::VectorXi idx(axes());
  for (int a = axes() - 1; a >= 0; --a) {
    idx(a) = static_cast<int>(point % static_cast<std::size_t>(resolution));
    point /= static_cast<std::size_t>(resolution);
  }
  return idx;
}

Eigen::VectorXd TorusGrid::coordinates(std::size_t point) const {
  return multi_index(point).cast<double>() * spacing();
}

ScalarField::ScalarField(const TorusGrid& g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != grid.size())
    throw DataError("ScalarField: value count does not match the grid");
}

ScalarField ScalarField::constant(const TorusGrid& g, double value) {
  return ScalarField(g, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.size()), value));
}

namespace {
void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw ArgumentError("fields live on different grids");
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  return ScalarField(a.grid, a.values + b.values);
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid);
  return ScalarField(a.grid, a.values - b.values);
}

ScalarField operator*(double s, const ScalarField& a) { return ScalarField(a.grid, s * a.values); }

HermitianField::HermitianField(const TorusGrid& g)
    : grid(g),
      diagonal(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.size()), g.n)),
      lower(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(g.size()), g.n * (g.n - 1) / 2)) {}

HermitianField HermitianField::constant(const TorusGrid& g, const PointMatrix& m) {
  if (m.rows() != g.n || m.cols() != g.n) throw ArgumentError("HermitianField: matrix size mismatch");
  HermitianField f(g);
  for (int i = 0; i < g.n; ++i) {
    f.diagonal.col(i).setConstant(m(i, i).real());
    for (int j = 0; j < i; ++j) f.lower.col(lower_index(i, j)).setConstant(m(i, j));
  }
  return f;
}

Complex HermitianField::entry(std::size_t p, int i, int j) const {
  const auto row = static_cast<Eigen::Index>(p);
  if (i == j) return {diagonal(row, i), 0.0};
  if (i > j) return lower(row, lower_index(i, j));
  return std::conj(lower(row, lower_index(j, i)));
}

PointMatrix HermitianField::at(std::size_t p) const {
  const int dim = n();
  const auto row = static_cast<Eigen::Index>(p);
  PointMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    m(i, i) = Complex(diagonal(row, i), 0.0);
    for (int j = 0; j < i; ++j) {
      const Complex z = lower(row, lower_index(i, j));
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

void HermitianField::set(std::size_t p, const PointMatrix& m) {
  const auto row = static_cast<Eigen::Index>(p);
  for (int i = 0; i < n(); ++i) {
    diagonal(row, i) = m(i, i).real();
    for (int j = 0; j < i; ++j) lower(row, lower_index(i, j)) = m(i, j);
  }
}

HermitianField operator+(const HermitianField& a, const HermitianField& b) {
  require_same_grid(a.grid, b.grid);
  HermitianField r(a.grid);
  r.diagonal = a.diagonal + b.diagonal;
  r.lower = a.lower + b.lower;
  return r;
}

HermitianField operator*(double s, const HermitianField& a) {
  HermitianField r(a.grid);
  r.diagonal = s * a.diagonal;
  r.lower = s * a.lower;
  return r;
}

BackgroundMetric::BackgroundMetric(const PointMatrix& g) : g_(g) {
  const int n = static_cast<int>(g.rows());
  if (n < 1 || n > kMaxDim || g.cols() != n) throw ArgumentError("BackgroundMetric: matrix must be square");
  if ((g - g.adjoint()).norm() > 1e-12 * (1.0 + g.norm()))
    throw DomainError("BackgroundMetric: matrix is not Hermitian");
  // symmetrize so the stored metric is exactly Hermitian
  g_ = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<PointMatrix> eig(g_, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) throw DomainError("BackgroundMetric: matrix is not positive definite");
  Eigen::LLT<PointMatrix> llt(g_);
  const PointMatrix l = llt.matrixL();
  l_inverse_ = l.triangularView<Eigen::Lower>().solve(PointMatrix::Identity(n, n));
  inverse_ = l_inverse_.adjoint() * l_inverse_;
  det_ = eig.eigenvalues().prod();
  inverse_norm_ = 1.0 / eig.eigenvalues().minCoeff();
  identity_ = (g_ - PointMatrix::Identity(n, n)).norm() == 0.0;
}

PointMatrix BackgroundMetric::reduce(const PointMatrix& x) const {
  if (identity_) return x;
  PointMatrix r = l_inverse_ * x * l_inverse_.adjoint();
  return 0.5 * (r + r.adjoint());
}

}  // namespace maflow
