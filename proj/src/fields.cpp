#include "maflow/fields.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

#include "maflow/errors.hpp"
#include "maflow/parallel.hpp"
#include "maflow/pencil.hpp"

namespace maflow {

namespace {

void require_dimension(const TorusGrid& grid, const BackgroundMetric& g) {
  if (grid.n != g.n()) throw ArgumentError("field and metric dimensions differ");
}

// Inverse Vandermonde matrix on n+1 equispaced nodes in [-1, 1].
struct InterpolationNodes {
  Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim + 1, 1> nodes;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim + 1, kMaxDim + 1> vandermonde_inverse;

  explicit InterpolationNodes(int n) : nodes(n + 1) {
    Eigen::MatrixXd v(n + 1, n + 1);
    for (int a = 0; a <= n; ++a) {
      nodes(a) = -1.0 + 2.0 * a / n;
      for (int p = 0; p <= n; ++p) v(a, p) = std::pow(nodes(a), p);
    }
    vandermonde_inverse = v.inverse();
  }
};

using DiscriminantBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim + 1, kMaxDim + 1>;

// n = 2: D_10 = tr A, D_01 = tr B, D_20 = det A, D_02 = det B, D_11 = tr A tr B - tr AB.
DiscriminantBlock discriminants_2(const PointMatrix& a, const PointMatrix& b) {
  DiscriminantBlock d = DiscriminantBlock::Zero(3, 3);
  const double ta = a(0, 0).real() + a(1, 1).real();
  const double tb = b(0, 0).real() + b(1, 1).real();
  d(0, 0) = 1.0;
  d(1, 0) = ta;
  d(0, 1) = tb;
  d(2, 0) = a(0, 0).real() * a(1, 1).real() - std::norm(a(1, 0));
  d(0, 2) = b(0, 0).real() * b(1, 1).real() - std::norm(b(1, 0));
  const double tab = a(0, 0).real() * b(0, 0).real() + a(1, 1).real() * b(1, 1).real() +
                     2.0 * (a(1, 0) * std::conj(b(1, 0))).real();
  d(1, 1) = ta * tb - tab;
  return d;
}

DiscriminantBlock discriminants_with(const PointMatrix& a_reduced, const PointMatrix& b_reduced,
                                     const InterpolationNodes& nodes) {
  const int n = static_cast<int>(a_reduced.rows());
  if (n == 2) return discriminants_2(a_reduced, b_reduced);
  const double sa = std::max(1.0, a_reduced.cwiseAbs().maxCoeff());
  const double sb = std::max(1.0, b_reduced.cwiseAbs().maxCoeff());
  const PointMatrix a = a_reduced / sa;
  const PointMatrix b = b_reduced / sb;
  DiscriminantBlock values(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      PointMatrix m = nodes.nodes(i) * a + nodes.nodes(j) * b;
      m.diagonal().array() += 1.0;
      values(i, j) = hermitian_determinant(m);
    }
  }
  DiscriminantBlock coeff = nodes.vandermonde_inverse * values * nodes.vandermonde_inverse.transpose();
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) coeff(p, q) *= std::pow(sa, p) * std::pow(sb, q);
  return coeff;
}

}  // namespace

SpectrumField eigenvalues_rel(const HermitianField& x, const BackgroundMetric& g) {
  require_dimension(x.grid, g);
  SpectrumField out{x.grid, Eigen::MatrixXd(static_cast<Eigen::Index>(x.size()), x.n())};
  parallel_for(x.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
      out.values.row(static_cast<Eigen::Index>(p)) = relative_eigenvalues(x.at(p), g).transpose();
  });
  return out;
}

double volume(const TorusGrid& grid, const BackgroundMetric& g) {
  require_dimension(grid, g);
  return factorial(grid.n) * g.determinant() * grid.cell_volume() * static_cast<double>(grid.size());
}

double integrate(const ScalarField& f, const BackgroundMetric& g) {
  require_dimension(f.grid, g);
  return factorial(f.grid.n) * g.determinant() * f.grid.cell_volume() * f.values.sum();
}

ScalarField wedge_ratio(const HermitianField& x, const BackgroundMetric& g, int p) {
  require_dimension(x.grid, g);
  const int n = x.n();
  if (p < 0 || p > n) throw ArgumentError("wedge_ratio: power out of range");
  const double norm = binomial(n, p);
  ScalarField out(x.grid);
  parallel_for(x.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const PointSpectrum lambda = relative_eigenvalues(x.at(q), g);
      out[q] = elementary_symmetric(lambda)(p) / norm;
    }
  });
  return out;
}

Eigen::MatrixXd mixed_discriminants(const PointMatrix& a, const PointMatrix& b, const BackgroundMetric& g) {
  if (a.rows() != g.n() || b.rows() != g.n()) throw ArgumentError("mixed_discriminants: dimension mismatch");
  const InterpolationNodes nodes(g.n());
  return discriminants_with(g.reduce(a), g.reduce(b), nodes);
}

MixedDiscriminantTable::MixedDiscriminantTable(const HermitianField& a, const HermitianField& b,
                                               const BackgroundMetric& g)
    : grid_(a.grid), n_(a.n()) {
  require_dimension(a.grid, g);
  if (!(a.grid == b.grid)) throw ArgumentError("MixedDiscriminantTable: grid mismatch");
  const InterpolationNodes nodes(n_);
  table_.resize(static_cast<Eigen::Index>(a.size()), (n_ + 1) * (n_ + 1));
  parallel_for(a.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const DiscriminantBlock d = discriminants_with(g.reduce(a.at(p)), g.reduce(b.at(p)), nodes);
      for (int i = 0; i <= n_; ++i)
        for (int j = 0; j <= n_; ++j) table_(static_cast<Eigen::Index>(p), i * (n_ + 1) + j) = d(i, j);
    }
  });
}

ScalarField MixedDiscriminantTable::wedge(int p, int q) const {
  if (p < 0 || q < 0 || p + q > n_) throw ArgumentError("mixed wedge: p + q must not exceed n");
  const double weight = factorial(p) * factorial(q) * factorial(n_ - p - q) / factorial(n_);
  return ScalarField(grid_, weight * table_.col(p * (n_ + 1) + q));
}

ScalarField mixed_wedge_ratio(const HermitianField& a, const HermitianField& b, const BackgroundMetric& g, int p,
                              int q) {
  if (p < 0 || q < 0 || p + q > a.n()) throw ArgumentError("mixed_wedge_ratio: p + q must not exceed n");
  return MixedDiscriminantTable(a, b, g).wedge(p, q);
}

HermitianField build_chi(const PointMatrix& chi0, const ScalarField& rho, const BackgroundMetric& g) {
  require_dimension(rho.grid, g);
  if (chi0.rows() != g.n() || chi0.cols() != g.n()) throw ArgumentError("build_chi: chi0 has the wrong size");
  if ((chi0 - chi0.adjoint()).norm() > 1e-12 * (1.0 + chi0.norm()))
    throw DomainError("build_chi: chi0 is not Hermitian");
  if (!(relative_eigenvalues(chi0, g).minCoeff() > 0.0)) throw DomainError("build_chi: chi0 is not positive");
  return HermitianField::constant(rho.grid, 0.5 * (chi0 + chi0.adjoint())) + complex_hessian(rho);
}

double positivity_margin(const HermitianField& x, const BackgroundMetric& g) {
  return eigenvalues_rel(x, g).values.col(0).minCoeff();
}

ScalarField gradient_norm(const ScalarField& u, const BackgroundMetric& g) {
  require_dimension(u.grid, g);
  const std::vector<Eigen::VectorXcd> grad = complex_gradient(u);
  const int n = u.grid.n;
  const PointMatrix& ginv = g.inverse();
  ScalarField out(u.grid);
  for (std::size_t p = 0; p < u.size(); ++p) {
    Complex s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += std::conj(grad[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(p))) * ginv(i, j) *
             grad[static_cast<std::size_t>(j)](static_cast<Eigen::Index>(p));
    out[p] = s.real();
  }
  return out;
}

ScalarField trace_rel(const HermitianField& x, const BackgroundMetric& g) {
  require_dimension(x.grid, g);
  const PointMatrix& ginv = g.inverse();
  ScalarField out(x.grid);
  for (std::size_t p = 0; p < x.size(); ++p) out[p] = (ginv * x.at(p)).trace().real();
  return out;
}

ScalarField trace_quantity_w(const ScalarField& u, const HermitianField& chi, const BackgroundMetric& g) {
  return trace_rel(chi + complex_hessian(u), g);
}

double closedness_defect(const HermitianField& chi) {
  const int n = chi.n();
  if (n < 2) return 0.0;
  const SpectralTransform transform(chi.grid);
  const std::size_t points = chi.size();

  // d_k chi_{i jbar} for all k, i, j
  std::vector<std::vector<Complex>> deriv(static_cast<std::size_t>(n * n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<Complex> entry(points);
      for (std::size_t p = 0; p < points; ++p) entry[p] = chi.entry(p, i, j);
      const std::vector<Complex> spectrum = transform.forward(std::move(entry));
      for (int k = 0; k < n; ++k) {
        std::vector<Complex> s(points);
        for (std::size_t m = 0; m < points; ++m) s[m] = transform.dz_multiplier(m, k) * spectrum[m];
        deriv[static_cast<std::size_t>((k * n + i) * n + j)] = transform.inverse(std::move(s));
      }
    }
  }
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) {
        const auto& a = deriv[static_cast<std::size_t>((k * n + i) * n + j)];
        const auto& b = deriv[static_cast<std::size_t>((i * n + k) * n + j)];
        for (std::size_t p = 0; p < points; ++p) worst = std::max(worst, std::abs(a[p] - b[p]));
      }
  const double scale = std::max(chi.diagonal.cwiseAbs().maxCoeff(),
                                chi.lower.size() ? chi.lower.cwiseAbs().maxCoeff() : 0.0);
  return worst / (1.0 + scale);
}

}  // namespace maflow
