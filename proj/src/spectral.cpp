#include "maflow/spectral.hpp"

#include <cmath>
#include <numbers>

#include "maflow/errors.hpp"
#include "maflow/parallel.hpp"

namespace maflow {

SpectralTransform::SpectralTransform(const TorusGrid& grid) : grid_(grid) {
  const int res = grid.resolution;
  const double scale = 2.0 * std::numbers::pi / grid.period;
  k1_.resize(static_cast<std::size_t>(res));
  k2_.resize(static_cast<std::size_t>(res));
  for (int j = 0; j < res; ++j) {
    const int signed_j = j < res / 2 ? j : j - res;
    k1_[static_cast<std::size_t>(j)] = j == res / 2 ? 0.0 : scale * signed_j;
    k2_[static_cast<std::size_t>(j)] = j == res / 2 ? scale * (res / 2) : scale * signed_j;
  }
  digit_stride_.resize(static_cast<std::size_t>(grid.axes()));
  int stride = 1;
  for (int a = grid.axes() - 1; a >= 0; --a) {
    digit_stride_[static_cast<std::size_t>(a)] = stride;
    stride *= res;
  }
}

void SpectralTransform::transform(std::vector<Complex>& data, bool inverse) const {
  const std::size_t res = static_cast<std::size_t>(grid_.resolution);
  const std::size_t total = data.size();
  const std::size_t lines = total / res;
  for (int a = 0; a < grid_.axes(); ++a) {
    const std::size_t stride = static_cast<std::size_t>(digit_stride_[static_cast<std::size_t>(a)]);
    parallel_for(lines, [&](std::size_t begin, std::size_t end) {
      Eigen::FFT<double> fft;
      std::vector<Complex> line(res), out(res);
      for (std::size_t l = begin; l < end; ++l) {
        const std::size_t outer = l / stride;
        const std::size_t inner = l % stride;
        const std::size_t base = outer * res * stride + inner;
        for (std::size_t k = 0; k < res; ++k) line[k] = data[base + k * stride];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (std::size_t k = 0; k < res; ++k) data[base + k * stride] = out[k];
      }
    });
  }
}

std::vector<Complex> SpectralTransform::forward(const ScalarField& f) const {
  if (!(f.grid == grid_)) throw ArgumentError("SpectralTransform: grid mismatch");
  if (!f.all_finite()) throw DataError("spectral transform of a non-finite field");
  std::vector<Complex> data(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) data[p] = Complex(f[p], 0.0);
  transform(data, false);
  return data;
}

std::vector<Complex> SpectralTransform::forward(std::vector<Complex> data) const {
  if (data.size() != grid_.size()) throw ArgumentError("SpectralTransform: size mismatch");
  transform(data, false);
  return data;
}

std::vector<Complex> SpectralTransform::inverse(std::vector<Complex> spectrum) const {
  transform(spectrum, true);
  return spectrum;
}

Complex SpectralTransform::dz_multiplier(std::size_t mode, int i) const {
  const std::size_t res = static_cast<std::size_t>(grid_.resolution);
  const int jx = static_cast<int>((mode / static_cast<std::size_t>(digit_stride_[static_cast<std::size_t>(2 * i)])) % res);
  const int jy =
      static_cast<int>((mode / static_cast<std::size_t>(digit_stride_[static_cast<std::size_t>(2 * i + 1)])) % res);
  // d/dz = (d/dx - i d/dy) / 2
  return 0.5 * Complex(first_wavenumber(jy), first_wavenumber(jx));
}

Complex SpectralTransform::hessian_multiplier(std::size_t mode, int i, int j) const {
  const std::size_t res = static_cast<std::size_t>(grid_.resolution);
  auto digit = [&](int axis) {
    return static_cast<int>((mode / static_cast<std::size_t>(digit_stride_[static_cast<std::size_t>(axis)])) % res);
  };
  if (i == j) {
    const double kx = second_wavenumber(digit(2 * i));
    const double ky = second_wavenumber(digit(2 * i + 1));
    return Complex(-0.25 * (kx * kx + ky * ky), 0.0);
  }
  const double kxi = first_wavenumber(digit(2 * i)), kyi = first_wavenumber(digit(2 * i + 1));
  const double kxj = first_wavenumber(digit(2 * j)), kyj = first_wavenumber(digit(2 * j + 1));
  return -0.25 * Complex(kxi * kxj + kyi * kyj, kxi * kyj - kyi * kxj);
}

HermitianField complex_hessian(const ScalarField& u) {
  const SpectralTransform transform(u.grid);
  const std::vector<Complex> spectrum = transform.forward(u);
  const std::size_t total = spectrum.size();
  const int n = u.grid.n;
  const int axes = u.grid.axes();
  const int res = u.grid.resolution;

  // Diagonal entries are real, so two of them share one inverse transform as re + i im.
  const int diagonal_buffers = (n + 1) / 2;
  const int lower_count = n * (n - 1) / 2;
  std::vector<std::vector<Complex>> buffers(static_cast<std::size_t>(diagonal_buffers + lower_count),
                                            std::vector<Complex>(total));
  std::vector<int> digit(static_cast<std::size_t>(axes), 0);
  std::vector<double> k1(static_cast<std::size_t>(axes)), k2(static_cast<std::size_t>(axes));
  for (std::size_t m = 0; m < total; ++m) {
    for (int a = 0; a < axes; ++a) {
      k1[static_cast<std::size_t>(a)] = transform.first_wavenumber(digit[static_cast<std::size_t>(a)]);
      k2[static_cast<std::size_t>(a)] = transform.second_wavenumber(digit[static_cast<std::size_t>(a)]);
    }
    const Complex s = spectrum[m];
    for (int i = 0; i < n; ++i) {
      const double kx = k2[static_cast<std::size_t>(2 * i)], ky = k2[static_cast<std::size_t>(2 * i + 1)];
      const Complex v = -0.25 * (kx * kx + ky * ky) * s;
      buffers[static_cast<std::size_t>(i / 2)][m] += (i % 2 == 0) ? v : Complex(0.0, 1.0) * v;
      const double kxi = k1[static_cast<std::size_t>(2 * i)], kyi = k1[static_cast<std::size_t>(2 * i + 1)];
      for (int j = 0; j < i; ++j) {
        const double kxj = k1[static_cast<std::size_t>(2 * j)], kyj = k1[static_cast<std::size_t>(2 * j + 1)];
        buffers[static_cast<std::size_t>(diagonal_buffers + HermitianField::lower_index(i, j))][m] =
            -0.25 * Complex(kxi * kxj + kyi * kyj, kxi * kyj - kyi * kxj) * s;
      }
    }
    for (int a = axes - 1; a >= 0; --a) {
      if (++digit[static_cast<std::size_t>(a)] < res) break;
      digit[static_cast<std::size_t>(a)] = 0;
    }
  }

  HermitianField h(u.grid);
  for (int d = 0; d < diagonal_buffers; ++d) {
    const std::vector<Complex> field = transform.inverse(std::move(buffers[static_cast<std::size_t>(d)]));
    for (std::size_t p = 0; p < total; ++p) {
      h.diagonal(static_cast<Eigen::Index>(p), 2 * d) = field[p].real();
      if (2 * d + 1 < n) h.diagonal(static_cast<Eigen::Index>(p), 2 * d + 1) = field[p].imag();
    }
  }
  for (int c = 0; c < lower_count; ++c) {
    const std::vector<Complex> field = transform.inverse(std::move(buffers[static_cast<std::size_t>(diagonal_buffers + c)]));
    for (std::size_t p = 0; p < total; ++p) h.lower(static_cast<Eigen::Index>(p), c) = field[p];
  }
  return h;
}

std::vector<Eigen::VectorXcd> complex_gradient(const ScalarField& u) {
  const SpectralTransform transform(u.grid);
  const std::vector<Complex> spectrum = transform.forward(u);
  std::vector<Eigen::VectorXcd> out;
  for (int i = 0; i < u.grid.n; ++i) {
    std::vector<Complex> s(spectrum.size());
    for (std::size_t m = 0; m < s.size(); ++m) s[m] = transform.dz_multiplier(m, i) * spectrum[m];
    const std::vector<Complex> field = transform.inverse(std::move(s));
    out.emplace_back(Eigen::Map<const Eigen::VectorXcd>(field.data(), static_cast<Eigen::Index>(field.size())));
  }
  return out;
}

ScalarField axis_derivative(const ScalarField& u, int axis) {
  if (axis < 0 || axis >= u.grid.axes()) throw ArgumentError("axis_derivative: axis out of range");
  const SpectralTransform transform(u.grid);
  std::vector<Complex> s = transform.forward(u);
  const std::size_t res = static_cast<std::size_t>(u.grid.resolution);
  std::size_t stride = 1;
  for (int a = u.grid.axes() - 1; a > axis; --a) stride *= res;
  for (std::size_t m = 0; m < s.size(); ++m) {
    const int j = static_cast<int>((m / stride) % res);
    s[m] *= Complex(0.0, transform.first_wavenumber(j));
  }
  const std::vector<Complex> field = transform.inverse(std::move(s));
  ScalarField out(u.grid);
  for (std::size_t p = 0; p < field.size(); ++p) out[p] = field[p].real();
  return out;
}

}  // namespace maflow
