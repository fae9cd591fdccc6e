#pragma once

// Elementary symmetric functions of a spectrum and the concave operator
//
//   F(lambda) = ln S_n(lambda) - ln sum_{a=1}^n c_a S_{n-a}(lambda)
//
// together with its gradient and Hessian in lambda. Everything here is a pure
// function templated on the scalar type of the Eigen expression passed in.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "maflow/errors.hpp"

namespace maflow {

/// Largest complex dimension supported by the library.
inline constexpr int kMaxDim = 8;

/// Entries at or below this value are treated as the boundary of the positive cone.
inline constexpr double kConeFloor = 1e-14;

template <typename Scalar>
using Spectrum = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

template <typename Scalar>
using SymmetricTable = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim + 1, 1>;

template <typename Scalar>
using SpectrumMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Binomial coefficient C(n, k) as a floating value; zero outside 0 <= k <= n.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Problem data b_1..b_n and the normalized weights c_a = b_a / C(n, a).
template <typename Scalar>
struct Coefficients {
  int n = 0;
  Spectrum<Scalar> b;
  Spectrum<Scalar> c;
  Scalar psi_floor = Scalar(0);  // 0 means "not set"

  Coefficients() = default;

  template <typename Derived>
  static Coefficients from_b(const Eigen::MatrixBase<Derived>& b_in) {
    Coefficients k;
    k.n = static_cast<int>(b_in.size());
    if (k.n < 2 || k.n > kMaxDim)
      throw ArgumentError("coefficient vector length must lie in [2, " + std::to_string(kMaxDim) + "]");
    k.b = b_in.template cast<Scalar>();
    Scalar total(0);
    for (int a = 0; a < k.n; ++a) {
      using std::isfinite;
      if (!(k.b(a) >= Scalar(0)) || !isfinite(static_cast<double>(k.b(a))))
        throw ArgumentError("coefficients b_a must be finite and nonnegative");
      total += k.b(a);
    }
    if (!(total > Scalar(0))) throw ArgumentError("coefficients b_a must have a positive sum");
    k.c.resize(k.n);
    for (int a = 1; a <= k.n; ++a) k.c(a - 1) = k.b(a - 1) / Scalar(binomial(k.n, a));
    return k;
  }

  /// b_a with a 1-based index, a = 1..n.
  Scalar b_at(int alpha) const { return b(alpha - 1); }
  Scalar c_at(int alpha) const { return c(alpha - 1); }
};

namespace detail {

inline void check_order(int alpha, int hi, const char* what) {
  if (alpha > hi) throw ArgumentError(std::string(what) + ": order out of range");
}

template <typename Derived>
void check_index(const Eigen::MatrixBase<Derived>& lambda, Eigen::Index i, const char* what) {
  if (i < 0 || i >= lambda.size()) throw ArgumentError(std::string(what) + ": index out of range");
}

template <typename Derived>
void require_positive_cone(const Eigen::MatrixBase<Derived>& lambda, const char* what) {
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (!(lambda(i) > typename Derived::Scalar(kConeFloor)))
      throw DomainError(std::string(what) + ": spectrum is not in the positive cone");
  }
}

// S_0..S_m of lambda with up to two entries skipped; skip < 0 means none.
template <typename Derived>
SymmetricTable<typename Derived::Scalar> symmetric_table_skipping(const Eigen::MatrixBase<Derived>& lambda,
                                                                  Eigen::Index skip1, Eigen::Index skip2) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = lambda.size();
  SymmetricTable<Scalar> e = SymmetricTable<Scalar>::Zero(n + 1);
  e(0) = Scalar(1);
  Eigen::Index used = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == skip1 || i == skip2) continue;
    ++used;
    for (Eigen::Index j = used; j >= 1; --j) e(j) += lambda(i) * e(j - 1);
  }
  return e;
}

}  // namespace detail

/// All elementary symmetric functions S_0..S_n, by expanding prod_i (1 + s lambda_i).
template <typename Derived>
SymmetricTable<typename Derived::Scalar> elementary_symmetric(const Eigen::MatrixBase<Derived>& lambda) {
  return detail::symmetric_table_skipping(lambda, -1, -1);
}

/// S_alpha(lambda), S_0 = 1.
template <typename Derived>
typename Derived::Scalar elem_sym(const Eigen::MatrixBase<Derived>& lambda, int alpha) {
  if (alpha < 0 || alpha > lambda.size()) throw ArgumentError("elem_sym: order out of range");
  return elementary_symmetric(lambda)(alpha);
}

/// S_{alpha;i}: S_alpha of lambda with entry i removed. Negative orders give 0.
template <typename Derived>
typename Derived::Scalar elem_sym_minor(const Eigen::MatrixBase<Derived>& lambda, int alpha, Eigen::Index i) {
  detail::check_index(lambda, i, "elem_sym_minor");
  detail::check_order(alpha, static_cast<int>(lambda.size()) - 1, "elem_sym_minor");
  if (alpha < 0) return typename Derived::Scalar(0);
  return detail::symmetric_table_skipping(lambda, i, -1)(alpha);
}

/// S_{alpha;ij} for i != j. Negative orders give 0; i == j gives 0, the
/// second derivative of a multilinear polynomial in a single variable.
template <typename Derived>
typename Derived::Scalar elem_sym_minor2(const Eigen::MatrixBase<Derived>& lambda, int alpha, Eigen::Index i,
                                         Eigen::Index j) {
  detail::check_index(lambda, i, "elem_sym_minor2");
  detail::check_index(lambda, j, "elem_sym_minor2");
  detail::check_order(alpha, static_cast<int>(lambda.size()) - 2, "elem_sym_minor2");
  if (alpha < 0 || i == j) return typename Derived::Scalar(0);
  return detail::symmetric_table_skipping(lambda, i, j)(alpha);
}

/// S_alpha(lambda^{-1}) = S_{n-alpha}(lambda) / S_n(lambda).
template <typename Derived>
typename Derived::Scalar reciprocal_sym(const Eigen::MatrixBase<Derived>& lambda, int alpha) {
  const int n = static_cast<int>(lambda.size());
  if (alpha < 0 || alpha > n) throw ArgumentError("reciprocal_sym: order out of range");
  detail::require_positive_cone(lambda, "reciprocal_sym");
  const auto e = elementary_symmetric(lambda);
  return e(n - alpha) / e(n);
}

/// sum_{a=1}^n c_a S_{n-a}(lambda), the denominator of the quotient.
template <typename Scalar, typename Table>
Scalar weighted_lower_sum(const Table& e, const Coefficients<Scalar>& coeff) {
  Scalar s(0);
  for (int a = 1; a <= coeff.n; ++a) s += coeff.c_at(a) * e(coeff.n - a);
  return s;
}

template <typename Derived>
typename Derived::Scalar operator_value(const Eigen::MatrixBase<Derived>& lambda,
                                        const Coefficients<typename Derived::Scalar>& coeff) {
  using Scalar = typename Derived::Scalar;
  if (lambda.size() != coeff.n) throw ArgumentError("operator_value: dimension mismatch");
  detail::require_positive_cone(lambda, "operator_value");
  const auto e = elementary_symmetric(lambda);
  const Scalar lower = weighted_lower_sum(e, coeff);
  if (!(lower > Scalar(0))) throw DomainError("operator_value: denominator is not positive");
  using std::log;
  return log(e(coeff.n)) - log(lower);
}

/// dF/dlambda_i = S_{n-1;i}/S_n - sum_a c_a S_{n-a-1;i} / sum_a c_a S_{n-a}.
template <typename Derived>
Spectrum<typename Derived::Scalar> operator_gradient(const Eigen::MatrixBase<Derived>& lambda,
                                                     const Coefficients<typename Derived::Scalar>& coeff) {
  using Scalar = typename Derived::Scalar;
  const int n = coeff.n;
  if (lambda.size() != n) throw ArgumentError("operator_gradient: dimension mismatch");
  detail::require_positive_cone(lambda, "operator_gradient");
  const auto e = elementary_symmetric(lambda);
  const Scalar lower = weighted_lower_sum(e, coeff);
  if (!(lower > Scalar(0))) throw DomainError("operator_gradient: denominator is not positive");
  Spectrum<Scalar> grad(n);
  for (int i = 0; i < n; ++i) {
    const auto ei = detail::symmetric_table_skipping(lambda, i, -1);
    Scalar d_lower(0);
    for (int a = 1; a <= n - 1; ++a) d_lower += coeff.c_at(a) * ei(n - a - 1);
    grad(i) = ei(n - 1) / e(n) - d_lower / lower;
  }
  return grad;
}

/// B_ij = d^2 F / dlambda_i dlambda_j, assembled from the symbolic formula.
template <typename Derived>
SpectrumMatrix<typename Derived::Scalar> operator_hessian(const Eigen::MatrixBase<Derived>& lambda,
                                                          const Coefficients<typename Derived::Scalar>& coeff) {
  using Scalar = typename Derived::Scalar;
  const int n = coeff.n;
  if (lambda.size() != n) throw ArgumentError("operator_hessian: dimension mismatch");
  detail::require_positive_cone(lambda, "operator_hessian");
  const auto e = elementary_symmetric(lambda);
  const Scalar top = e(n);
  const Scalar lower = weighted_lower_sum(e, coeff);
  if (!(lower > Scalar(0))) throw DomainError("operator_hessian: denominator is not positive");

  Spectrum<Scalar> top_1(n), lower_1(n);
  for (int i = 0; i < n; ++i) {
    const auto ei = detail::symmetric_table_skipping(lambda, i, -1);
    top_1(i) = ei(n - 1);
    Scalar s(0);
    for (int a = 1; a <= n - 1; ++a) s += coeff.c_at(a) * ei(n - a - 1);
    lower_1(i) = s;
  }

  SpectrumMatrix<Scalar> hess(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      Scalar top_2(0), lower_2(0);
      if (i != j) {
        const auto eij = detail::symmetric_table_skipping(lambda, i, j);
        top_2 = eij(n - 2);
        for (int a = 1; a <= n - 2; ++a) lower_2 += coeff.c_at(a) * eij(n - a - 2);
      }
      const Scalar v = top_2 / top - top_1(i) * top_1(j) / (top * top) - lower_2 / lower +
                       lower_1(i) * lower_1(j) / (lower * lower);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

/// Both sides of the strong-concavity chain
///   sum_i S_{a-1;i}/lambda_i |xi_i|^2 + sum_{i!=j} S_{a-2;ij} xi_i conj(xi_j)
///     >= |sum_i S_{a-1;i} xi_i|^2 / S_a >= 0.
/// Returns (lhs - mid, mid).
template <typename DerivedL, typename DerivedX>
std::pair<typename DerivedL::Scalar, typename DerivedL::Scalar> strong_concavity_gap(
    const Eigen::MatrixBase<DerivedL>& lambda, const Eigen::MatrixBase<DerivedX>& xi, int alpha) {
  using Scalar = typename DerivedL::Scalar;
  using Complex = std::complex<Scalar>;
  const int n = static_cast<int>(lambda.size());
  if (xi.size() != n) throw ArgumentError("strong_concavity_gap: dimension mismatch");
  if (alpha < 1 || alpha > n) throw ArgumentError("strong_concavity_gap: order out of range");
  detail::require_positive_cone(lambda, "strong_concavity_gap");

  const Scalar s_alpha = elementary_symmetric(lambda)(alpha);
  Scalar lhs(0);
  Complex weighted(0);
  for (int i = 0; i < n; ++i) {
    const Complex x = Complex(xi(i));
    const Scalar s1 = detail::symmetric_table_skipping(lambda, i, -1)(alpha - 1);
    lhs += s1 / lambda(i) * std::norm(x);
    weighted += s1 * x;
    if (alpha >= 2) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Scalar s2 = detail::symmetric_table_skipping(lambda, i, j)(alpha - 2);
        lhs += s2 * std::real(x * std::conj(Complex(xi(j))));
      }
    }
  }
  const Scalar mid = std::norm(weighted) / s_alpha;
  return {lhs - mid, mid};
}

}  // namespace maflow
