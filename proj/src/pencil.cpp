#include "maflow/pencil.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace maflow {

namespace {

PointSpectrum eigenvalues_2x2(const PointMatrix& a) {
  const double p = a(0, 0).real();
  const double q = a(1, 1).real();
  const double half_gap = 0.5 * (p - q);
  const double r = std::hypot(half_gap, std::abs(a(1, 0)));
  const double mean = 0.5 * (p + q);
  PointSpectrum ev(2);
  // the larger root is computed without cancellation; the smaller follows from the determinant
  const double big = mean >= 0.0 ? mean + r : mean - r;
  const double det = p * q - std::norm(a(1, 0));
  const double small = big != 0.0 ? det / big : 0.0;
  ev(0) = std::min(big, small);
  ev(1) = std::max(big, small);
  return ev;
}

// Trigonometric solution of the characteristic cubic on the shifted, scaled matrix.
PointSpectrum eigenvalues_3x3(const PointMatrix& a) {
  const double a00 = a(0, 0).real(), a11 = a(1, 1).real(), a22 = a(2, 2).real();
  const double off = std::norm(a(1, 0)) + std::norm(a(2, 0)) + std::norm(a(2, 1));
  const double q = (a00 + a11 + a22) / 3.0;
  const double b00 = a00 - q, b11 = a11 - q, b22 = a22 - q;
  const double p2 = (b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * off) / 6.0;
  PointSpectrum ev(3);
  if (p2 <= 1e-300) {
    ev.setConstant(q);
    return ev;
  }
  const double p = std::sqrt(p2);
  // det(B) for Hermitian B with real diagonal
  const Complex b10 = a(1, 0), b20 = a(2, 0), b21 = a(2, 1);
  const double det = b00 * b11 * b22 + 2.0 * std::real(b10 * b21 * std::conj(b20)) - b00 * std::norm(b21) -
                     b11 * std::norm(b20) - b22 * std::norm(b10);
  const double r = std::clamp(det / (2.0 * p2 * p), -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e_hi = q + 2.0 * p * std::cos(phi);
  const double e_lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e_mid = 3.0 * q - e_hi - e_lo;
  ev(0) = e_lo;
  ev(1) = e_mid;
  ev(2) = e_hi;
  std::sort(ev.data(), ev.data() + 3);
  return ev;
}

}  // namespace

PointSpectrum hermitian_eigenvalues(const PointMatrix& a) {
  switch (a.rows()) {
    case 1: {
      PointSpectrum ev(1);
      ev(0) = a(0, 0).real();
      return ev;
    }
    case 2:
      return eigenvalues_2x2(a);
    case 3:
      return eigenvalues_3x3(a);
    default: {
      Eigen::SelfAdjointEigenSolver<PointMatrix> eig(a, Eigen::EigenvaluesOnly);
      return eig.eigenvalues();
    }
  }
}

PointSpectrum relative_eigenvalues(const PointMatrix& x, const BackgroundMetric& g) {
  return hermitian_eigenvalues(g.reduce(x));
}

double hermitian_determinant(const PointMatrix& a) {
  switch (a.rows()) {
    case 1:
      return a(0, 0).real();
    case 2:
      return a(0, 0).real() * a(1, 1).real() - std::norm(a(1, 0));
    default:
      return a.partialPivLu().determinant().real();
  }
}

}  // namespace maflow
