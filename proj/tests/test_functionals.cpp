#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "maflow/functionals.hpp"
#include "maflow/spectral.hpp"
#include "support.hpp"

using namespace maflow;
using namespace maflow::test;

namespace {

constexpr double kPi = std::numbers::pi;

PointMatrix scaled_identity(int n, double s) { return PointMatrix(s * PointMatrix::Identity(n, n)); }

Coefficients<double> coeff2(double b1, double b2) {
  Eigen::VectorXd b(2);
  b << b1, b2;
  return Coefficients<double>::from_b(b);
}

// Wavenumbers small enough that every product appearing in the functionals is
// resolved exactly on an 8-point grid.
int safe_kmax(int n) { return n == 2 ? 2 : 1; }

struct Setup {
  TorusGrid grid;
  BackgroundMetric g;
  HermitianField chi;
};

Setup make_setup(int n, std::mt19937_64& rng, double rho_amp = 0.2) {
  const TorusGrid grid(n, 8);
  BackgroundMetric g(PointMatrix(random_positive(n, rng, 2.0)));
  const ScalarField rho = random_trig(n, 4, safe_kmax(n), rho_amp, rng).sample(grid);
  HermitianField chi = build_chi(PointMatrix(random_positive(n, rng, 2.0)), rho, g);
  return {grid, g, chi};
}

// int_0^1 int dv/ds chi_{v(s)}^{n-alpha} ^ omega^alpha ds by Gauss-Legendre quadrature.
double path_integral(const Setup& s, int alpha, const std::function<ScalarField(double)>& v,
                     const std::function<ScalarField(double)>& dv, int nodes = 64) {
  const auto [x, w] = gauss_legendre(nodes);
  const int m = s.g.n() - alpha;
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const HermitianField chi_v = s.chi + complex_hessian(v(x[i]));
    const ScalarField density = wedge_ratio(chi_v, s.g, m);
    total += w[i] * integrate(ScalarField(s.grid, dv(x[i]).values.cwiseProduct(density.values)), s.g);
  }
  return total;
}

}  // namespace

TEST_CASE("invariant constant") {
  const TorusGrid grid(2, 8);
  const BackgroundMetric g = BackgroundMetric::identity(2);
  const HermitianField two = HermitianField::constant(grid, scaled_identity(2, 2));
  CHECK(invariant_c(two, g, coeff2(1, 1)) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(invariant_c(HermitianField::constant(grid, scaled_identity(2, 1)), g, coeff2(0.3, 1.2)) ==
        doctest::Approx(1.0 / 1.5).epsilon(1e-14));

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField rho = random_trig(2, 6, 2, 0.3, rng).sample(grid);
    const HermitianField chi = build_chi(scaled_identity(2, 2), rho, g);
    CHECK(std::abs(invariant_c(chi, g, coeff2(1, 1)) - 4.0 / 3.0) <= 1e-10);
  }
}

TEST_CASE("closedness is required") {
  const TorusGrid grid(2, 8);
  HermitianField open = HermitianField::constant(grid, scaled_identity(2, 2));
  open.diagonal.col(0) += single_mode(2, 2, 1, 0.1).sample(grid).values;
  CHECK_THROWS_AS(ClosedForm::verify(open), DomainError);
  CHECK_NOTHROW(ClosedForm::verify(HermitianField::constant(grid, scaled_identity(2, 2))));
}

TEST_CASE("functionals of constants") {
  const TorusGrid grid(2, 8);
  const BackgroundMetric g = BackgroundMetric::identity(2);
  const ClosedForm chi = ClosedForm::verify(HermitianField::constant(grid, scaled_identity(2, 2)));
  const auto k = coeff2(1, 1);
  const ScalarField zero(grid);
  const ScalarField one = ScalarField::constant(grid, 1.0);
  const double vol = volume(grid, g);
  CHECK(vol == doctest::Approx(2 * std::pow(2 * kPi, 4)));

  for (int a = 0; a <= 2; ++a) CHECK(J_alpha(zero, chi, g, a) == 0.0);
  CHECK(J_alpha(one, chi, g, 1) == doctest::Approx(2 * 2 * std::pow(2 * kPi, 4)));
  CHECK(J_alpha(one, chi, g, 2) == doctest::Approx(vol));
  CHECK(I_functional(one, chi, g) == doctest::Approx(4 * vol));
  CHECK(J_total(one, chi, g, k) == doctest::Approx(3 * vol));
  CHECK(std::abs(Jhat(one, chi, g, k)) <= 1e-12 * vol);
  CHECK(std::abs(Jhat(ScalarField::constant(grid, -2.5), chi, g, k)) <= 1e-12 * vol);
  CHECK(Jhat(zero, chi, g, k) == 0.0);
  CHECK_THROWS_AS(J_alpha(one, chi, g, 3), ArgumentError);

  const auto [hat, shift] = normalize_hat(ScalarField::constant(grid, 1.7), chi, g, k);
  CHECK(shift == doctest::Approx(1.7));
  CHECK(hat.values.cwiseAbs().maxCoeff() <= 1e-13);
  const auto [hat0, shift0] = normalize_hat(zero, chi, g, k);
  CHECK(shift0 == 0.0);
  CHECK(hat0.values.cwiseAbs().maxCoeff() == 0.0);

  CHECK(properness_pairing(zero, chi.field(), g) == 0.0);
  CHECK(std::abs(properness_pairing(one, chi.field(), g)) <= 1e-12 * vol);
}

TEST_CASE("tilde normalization") {
  const TorusGrid grid(2, 8);
  const BackgroundMetric g(scaled_identity(2, 3));
  const auto [z, kappa] = normalize_tilde(ScalarField::constant(grid, 2.5), g);
  CHECK(kappa == doctest::Approx(2.5));
  CHECK(z.values.cwiseAbs().maxCoeff() <= 1e-15);

  const ScalarField c1 = single_mode(2, 0, 1, 1.0).sample(grid);
  const auto [same, mean] = normalize_tilde(c1, g);
  CHECK(std::abs(mean) <= 1e-15);
  CHECK(sup_diff(same, c1) <= 1e-15);

  std::mt19937_64 rng(42);
  ScalarField u = random_trig(2, 5, 3, 1.0, rng).sample(grid);
  u = u + ScalarField::constant(grid, 0.7);
  const auto [t1, s1] = normalize_tilde(u, g);
  const auto [t2, s2] = normalize_tilde(t1, g);
  CHECK(s1 == doctest::Approx(0.7));
  CHECK(std::abs(s2) <= 1e-15);
  CHECK(sup_diff(t1, t2) <= 1e-15);
  CHECK(std::abs(integrate(t1, g)) <= 1e-14 * volume(grid, g));
}

TEST_CASE("line formula agrees with path integrals") {
  std::mt19937_64 rng(43);
  for (int n = 2; n <= 3; ++n) {
    // the integrands are polynomials of degree <= 2n + 1 in s, so 8 nodes are already exact
    const int nodes = n == 2 ? 64 : 8;
    for (int trial = 0; trial < (n == 2 ? 3 : 1); ++trial) {
      const Setup s = make_setup(n, rng);
      // a nonzero mean keeps every J_alpha away from zero so the relative tolerance is meaningful
      const ScalarField u = random_trig(n, 4, safe_kmax(n), 0.2, rng).sample(s.grid) + ScalarField::constant(s.grid, 0.3);
      const ClosedForm chi = ClosedForm::verify(s.chi);
      REQUIRE(positivity_margin(s.chi + complex_hessian(u), s.g) > 0.0);
      for (int alpha = 0; alpha <= n; ++alpha) {
        const double line = J_alpha(u, chi, s.g, alpha);
        const double linear = path_integral(s, alpha, [&](double t) { return t * u; }, [&](double) { return u; }, nodes);
        const double quadratic =
            path_integral(s, alpha, [&](double t) { return (t * t) * u; }, [&](double t) { return (2 * t) * u; }, nodes);
        const double scale = std::abs(line);
        CHECK(std::abs(line - linear) <= 1e-8 * scale);
        CHECK(std::abs(line - quadratic) <= 1e-7 * scale);
      }
    }
  }
}

TEST_CASE("path independence through an intermediate potential") {
  std::mt19937_64 rng(44);
  const Setup s = make_setup(2, rng);
  const ClosedForm chi = ClosedForm::verify(s.chi);
  const ScalarField u = random_trig(2, 4, 2, 0.2, rng).sample(s.grid) + ScalarField::constant(s.grid, 0.4);
  const ScalarField v = random_trig(2, 4, 2, 0.2, rng).sample(s.grid) - ScalarField::constant(s.grid, 0.2);
  for (int alpha = 0; alpha <= 2; ++alpha) {
    // 0 -> v -> u along two segments
    const double first = path_integral(s, alpha, [&](double t) { return t * v; }, [&](double) { return v; }, 8);
    const double second = path_integral(
        s, alpha, [&](double t) { return v + t * (u - v); }, [&](double) { return u - v; }, 8);
    const double line = J_alpha(u, chi, s.g, alpha);
    CHECK(std::abs(first + second - line) <= 1e-9 * std::abs(line));
  }
}

TEST_CASE("report is consistent with the individual functionals") {
  std::mt19937_64 rng(45);
  for (int n = 2; n <= 3; ++n) {
    const Setup s = make_setup(n, rng);
    const ClosedForm chi = ClosedForm::verify(s.chi);
    Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, 0.5, 1.5);
    const auto k = Coefficients<double>::from_b(b);
    const ScalarField u = random_trig(n, 4, safe_kmax(n), 0.2, rng).sample(s.grid);
    const FunctionalReport r = functional_report(u, chi, s.g, k);
    const double scale = 1.0 + std::abs(r.J) + std::abs(r.I);
    for (int a = 1; a <= n; ++a) CHECK(r.J_alpha(a - 1) == doctest::Approx(J_alpha(u, chi, s.g, a)).epsilon(1e-12));
    CHECK(std::abs(r.J - b.dot(r.J_alpha)) <= 1e-12 * scale);
    CHECK(std::abs(r.J - J_total(u, chi, s.g, k)) <= 1e-12 * scale);
    CHECK(std::abs(r.I - I_functional(u, chi, s.g)) <= 1e-12 * scale);
    CHECK(r.c == doctest::Approx(invariant_c(s.chi, s.g, k)).epsilon(1e-13));
    CHECK(std::abs(r.Jhat - (r.J - r.I / r.c)) <= 1e-12 * scale);
    CHECK(std::abs(r.Jhat - Jhat(u, chi, s.g, k)) <= 1e-12 * scale);
    CHECK(r.volume == doctest::Approx(volume(s.grid, s.g)));
    CHECK(r.tilde_shift == doctest::Approx(normalize_tilde(u, s.g).second).epsilon(1e-12));
    CHECK(r.hat_shift == doctest::Approx(normalize_hat(u, chi, s.g, k).second).epsilon(1e-12));
    CHECK(r.properness_pairing == doctest::Approx(properness_pairing(u, s.chi, s.g)).epsilon(1e-10).scale(1e-12 * r.volume));
    CHECK(r.J == doctest::Approx(functional_report(u, s.chi + complex_hessian(u), chi, s.g, k).J).epsilon(1e-14));
  }
}

TEST_CASE("properness pairing is a Dirichlet energy at leading order") {
  std::mt19937_64 rng(46);
  const Setup s = make_setup(2, rng);
  const ScalarField u = random_trig(2, 4, 2, 1.0, rng).sample(s.grid);
  // the e^2 coefficient of int e u (chi^n - chi_{eu}^n) is -n int u H(u) ^ chi^{n-1}, n = 2
  const ScalarField mixed = mixed_wedge_ratio(s.chi, complex_hessian(u), s.g, 1, 1);
  const double leading = -2.0 * integrate(ScalarField(s.grid, u.values.cwiseProduct(mixed.values)), s.g);
  CHECK(leading > 0.0);
  for (double eps : {1e-2, 1e-3}) {
    const double pairing = properness_pairing(eps * u, s.chi, s.g);
    CHECK(pairing > 0.0);
    CHECK(pairing / (eps * eps) == doctest::Approx(leading).epsilon(5 * eps));
  }
}

TEST_CASE("cocycle identity") {
  std::mt19937_64 rng(47);
  for (int n = 2; n <= 3; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const Setup s = make_setup(n, rng);
      const auto k = Coefficients<double>::from_b(Eigen::VectorXd::Ones(n));
      const ScalarField u = random_trig(n, 3, safe_kmax(n), 0.15, rng).sample(s.grid);
      const ScalarField v = random_trig(n, 3, safe_kmax(n), 0.15, rng).sample(s.grid);
      const ClosedForm chi = ClosedForm::verify(s.chi);
      const ClosedForm chi_u = ClosedForm::verify(s.chi + complex_hessian(u));
      const double lhs = Jhat(v, chi, s.g, k);
      const double rhs = Jhat(u, chi, s.g, k) + Jhat(v - u, chi_u, s.g, k);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("the generalized J functional is minimal at a critical point") {
  // chi = 2g with b = (1, 1) solves the critical point equation with u = 0
  const TorusGrid grid(2, 8);
  const BackgroundMetric g = BackgroundMetric::identity(2);
  const ClosedForm chi = ClosedForm::verify(HermitianField::constant(grid, scaled_identity(2, 2)));
  const auto k = coeff2(1, 1);
  std::mt19937_64 rng(48);
  int tested = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const ScalarField u = random_trig(2, 5, 2, 0.4, rng).sample(grid);
    if (!(positivity_margin(chi.field() + complex_hessian(u), g) > 0.0)) continue;
    ++tested;
    CHECK(Jhat(u, chi, g, k) >= -1e-12 * volume(grid, g));
  }
  CHECK(tested >= 10);
}
