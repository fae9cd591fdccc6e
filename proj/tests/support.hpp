#pragma once

// Independent reference computations used as oracles by the tests.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "maflow/fields.hpp"
#include "maflow/grid.hpp"
#include "maflow/symcalc.hpp"
#include "maflow/trig.hpp"

namespace maflow::test {

/// S_alpha by enumerating all alpha-subsets.
inline double subset_sum(const Eigen::VectorXd& lambda, int alpha) {
  const int n = static_cast<int>(lambda.size());
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != alpha) continue;
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) prod *= lambda(i);
    total += prod;
  }
  return total;
}

/// Gauss-Legendre nodes and weights on [0, 1] by Newton iteration on P_m.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m) {
  std::vector<double> x(static_cast<std::size_t>(m)), w(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Bivariate polynomial in (s, t), coefficient (p, q) of s^p t^q.
using Poly2 = Eigen::MatrixXd;

/// Coefficients of det(I + sA + tB) by permutation expansion with polynomial entries.
inline Poly2 det_polynomial(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    prod(0, 0) = inversions % 2 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];
      const std::complex<double> c0 = i == j ? 1.0 : 0.0;
      Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(n + 1, n + 1);
      for (int p = 0; p <= n; ++p)
        for (int q = 0; q + p <= n; ++q) {
          const auto v = prod(p, q);
          if (v == 0.0) continue;
          next(p, q) += v * c0;
          if (p + 1 <= n) next(p + 1, q) += v * a(i, j);
          if (q + 1 <= n) next(p, q + 1) += v * b(i, j);
        }
      prod = next;
    }
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total.real();
}

inline Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(normal(rng), normal(rng));
  return scale * 0.5 * (m + m.adjoint());
}

inline Eigen::MatrixXcd random_positive(int n, std::mt19937_64& rng, double shift = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(normal(rng), normal(rng));
  Eigen::MatrixXcd p = m * m.adjoint() / n;
  p.diagonal().array() += shift;
  return p;
}

/// Random trigonometric polynomial with wavenumbers |k| <= kmax per axis.
inline TrigPolynomial random_trig(int n, int modes, int kmax, double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-amplitude, amplitude);
  std::uniform_int_distribution<int> wave(-kmax, kmax);
  TrigPolynomial t;
  for (int m = 0; m < modes; ++m) {
    TrigMode mode;
    mode.amplitude = amp(rng);
    bool zero = true;
    do {
      zero = true;
      mode.wavevector.assign(static_cast<std::size_t>(2 * n), 0);
      for (int& w : mode.wavevector) {
        w = wave(rng);
        zero = zero && w == 0;
      }
    } while (zero);
    mode.kind = m % 2 ? TrigMode::Kind::Sin : TrigMode::Kind::Cos;
    t.modes.push_back(mode);
  }
  return t;
}

inline TrigPolynomial single_mode(int n, int axis, int k, double amplitude, TrigMode::Kind kind = TrigMode::Kind::Cos) {
  TrigMode mode;
  mode.amplitude = amplitude;
  mode.wavevector.assign(static_cast<std::size_t>(2 * n), 0);
  mode.wavevector[static_cast<std::size_t>(axis)] = k;
  mode.kind = kind;
  TrigPolynomial t;
  t.modes.push_back(mode);
  return t;
}

inline double sup_diff(const ScalarField& a, const ScalarField& b) { return (a.values - b.values).cwiseAbs().maxCoeff(); }

inline double sup_diff(const HermitianField& a, const HermitianField& b) {
  double d = (a.diagonal - b.diagonal).cwiseAbs().maxCoeff();
  if (a.lower.size()) d = std::max(d, (a.lower - b.lower).cwiseAbs().maxCoeff());
  return d;
}

/// Smallest pairing of the (n-1, n-1) form n chi^{n-1} - psi sum_a b_a (n-a) chi^{n-a-1} ^ omega^a
/// with the coordinate directions e_k, divided by omega^n. For diagonal chi and g = I
/// its sign decides positivity of the form.
inline double wedge_cone_slack(const HermitianField& chi, const ScalarField& psi, const BackgroundMetric& g,
                               const Coefficients<double>& coeff) {
  const int n = chi.n();
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    PointMatrix e = PointMatrix::Zero(n, n);
    e(k, k) = 1.0;
    const HermitianField dir = HermitianField::constant(chi.grid, e);
    Eigen::VectorXd form = n * mixed_wedge_ratio(chi, dir, g, n - 1, 1).values;
    for (int a = 1; a <= n - 1; ++a)
      form -= (coeff.b_at(a) * (n - a)) * psi.values.cwiseProduct(mixed_wedge_ratio(chi, dir, g, n - a - 1, 1).values);
    worst = std::min(worst, form.minCoeff());
  }
  return worst;
}

}  // namespace maflow::test
