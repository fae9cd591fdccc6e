#include "maflow/trig.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "maflow/errors.hpp"

namespace maflow {

namespace {

void check_mode(const TrigMode& m, const TorusGrid& grid) {
  if (static_cast<int>(m.wavevector.size()) != grid.axes())
    throw ArgumentError("trigonometric mode has the wrong number of wavenumbers");
}

double phase(const TrigMode& m, const Eigen::VectorXd& x, double scale) {
  double theta = 0.0;
  for (std::size_t a = 0; a < m.wavevector.size(); ++a) theta += scale * m.wavevector[a] * x(static_cast<Eigen::Index>(a));
  return theta;
}

}  // namespace

int TrigPolynomial::max_wavenumber() const {
  int k = 0;
  for (const auto& m : modes)
    for (int w : m.wavevector) k = std::max(k, std::abs(w));
  return k;
}

ScalarField TrigPolynomial::sample(const TorusGrid& grid) const {
  for (const auto& m : modes) check_mode(m, grid);
  const double scale = 2.0 * std::numbers::pi / grid.period;
  ScalarField f = ScalarField::constant(grid, constant);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Eigen::VectorXd x = grid.coordinates(p);
    for (const auto& m : modes) {
      const double theta = phase(m, x, scale);
      f[p] += m.amplitude * (m.kind == TrigMode::Kind::Cos ? std::cos(theta) : std::sin(theta));
    }
  }
  return f;
}

HermitianField TrigPolynomial::hessian(const TorusGrid& grid) const {
  for (const auto& m : modes) check_mode(m, grid);
  const double scale = 2.0 * std::numbers::pi / grid.period;
  const int n = grid.n;
  HermitianField h(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Eigen::VectorXd x = grid.coordinates(p);
    PointMatrix acc = PointMatrix::Zero(n, n);
    for (const auto& m : modes) {
      const double theta = phase(m, x, scale);
      // second derivatives of cos/sin are -k_a k_b times the function itself
      const double f = m.amplitude * (m.kind == TrigMode::Kind::Cos ? std::cos(theta) : std::sin(theta));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
          const double kxi = scale * m.wavevector[2 * i], kyi = scale * m.wavevector[2 * i + 1];
          const double kxj = scale * m.wavevector[2 * j], kyj = scale * m.wavevector[2 * j + 1];
          acc(i, j) += -0.25 * Complex(kxi * kxj + kyi * kyj, kxi * kyj - kyi * kxj) * f;
        }
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) acc(i, j) = std::conj(acc(j, i));
    h.set(p, acc);
  }
  return h;
}

std::vector<Eigen::VectorXcd> TrigPolynomial::gradient(const TorusGrid& grid) const {
  for (const auto& m : modes) check_mode(m, grid);
  const double scale = 2.0 * std::numbers::pi / grid.period;
  const int n = grid.n;
  std::vector<Eigen::VectorXcd> g(static_cast<std::size_t>(n),
                                  Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.size())));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Eigen::VectorXd x = grid.coordinates(p);
    for (const auto& m : modes) {
      const double theta = phase(m, x, scale);
      const double df = m.amplitude * (m.kind == TrigMode::Kind::Cos ? -std::sin(theta) : std::cos(theta));
      for (int i = 0; i < n; ++i) {
        const double kx = scale * m.wavevector[2 * i], ky = scale * m.wavevector[2 * i + 1];
        g[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(p)) += 0.5 * Complex(kx, -ky) * df;
      }
    }
  }
  return g;
}

}  // namespace maflow
