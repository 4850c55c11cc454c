#include "polyheat/spectral_field.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <vector>

#include "polyheat/errors.hpp"

namespace polyheat {

namespace {

// Unnormalized DFT of one line, sum_j x_j e^{-2 pi i j k / M}.
void dft_line(std::vector<Complex>& line, std::vector<Complex>& out, bool inverse) {
  static thread_local Eigen::FFT<Real> fft;
  if (inverse) {
    for (auto& z : line) z = std::conj(z);
  }
  fft.fwd(out, line);
  if (inverse) {
    for (auto& z : out) z = std::conj(z);
    for (auto& z : line) z = std::conj(z);
  }
}

// Applies the 1-D transform along `axis` of a flattened M x M array (axis 0
// is the slow index). For dim 1 there is a single line.
void transform_axis(const Grid& g, ArrayXc& data, int axis, bool forward) {
  const int m = g.points_per_axis();
  const int half = m / 2;
  const int lines = g.dim() == 1 ? 1 : m;
  std::vector<Complex> line(static_cast<std::size_t>(m));
  std::vector<Complex> out;
  for (int l = 0; l < lines; ++l) {
    auto at = [&](int i) -> Complex& {
      if (g.dim() == 1) return data[i];
      return axis == 0 ? data[g.flat(i, l)] : data[g.flat(l, i)];
    };
    if (forward) {
      for (int j = 0; j < m; ++j) line[static_cast<std::size_t>(j)] = at(j);
      dft_line(line, out, false);
      // bin b -> ascending index (b + M/2) mod M, with the e^{i pi j} phase
      for (int b = 0; b < m; ++b) {
        const Real sign = (b % 2 == 0) ? 1.0 : -1.0;
        at((b + half) % m) = sign * out[static_cast<std::size_t>(b)];
      }
    } else {
      for (int i = 0; i < m; ++i) {
        const int b = (i + half) % m;
        const Real sign = (b % 2 == 0) ? 1.0 : -1.0;
        line[static_cast<std::size_t>(b)] = sign * at(i);
      }
      dft_line(line, out, true);
      for (int j = 0; j < m; ++j) at(j) = out[static_cast<std::size_t>(j)];
    }
  }
}

}  // namespace

ArrayXc forward_transform(const Grid& grid, const ArrayXc& values) {
  if (static_cast<std::size_t>(values.size()) != grid.size()) {
    throw validation_error("forward_transform: value count does not match grid");
  }
  ArrayXc data = values;
  for (int axis = 0; axis < grid.dim(); ++axis) transform_axis(grid, data, axis, true);
  const Real scale = std::pow(grid.spacing() / std::sqrt(kTwoPi), grid.dim());
  return data * scale;
}

ArrayXc inverse_transform(const Grid& grid, const ArrayXc& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != grid.size()) {
    throw validation_error("inverse_transform: coefficient count does not match grid");
  }
  ArrayXc data = coeffs;
  for (int axis = 0; axis < grid.dim(); ++axis) transform_axis(grid, data, axis, false);
  const Real scale = std::pow(grid.freq_spacing() / std::sqrt(kTwoPi), grid.dim());
  return data * scale;
}

SpectralField SpectralField::from_values(const Grid& grid, ArrayXc values, bool real_signal) {
  ArrayXc coeffs = forward_transform(grid, values);
  return SpectralField(grid, std::move(values), std::move(coeffs), real_signal);
}

SpectralField SpectralField::from_real_values(const Grid& grid, const ArrayXr& values) {
  return from_values(grid, values.cast<Complex>(), true);
}

SpectralField SpectralField::from_coeffs(const Grid& grid, ArrayXc coeffs, bool real_signal) {
  ArrayXc values = inverse_transform(grid, coeffs);
  if (real_signal) {
    const Real scale = std::max<Real>(1.0, values.abs().maxCoeff());
    const Real residue = values.imag().abs().maxCoeff();
    if (residue > 1e-10 * scale) {
      throw numerical_error("SpectralField: imaginary residue above tolerance for a real signal");
    }
    values = values.real().cast<Complex>();
  }
  return SpectralField(grid, std::move(values), std::move(coeffs), real_signal);
}

Real SpectralField::parseval_gap() const {
  const Real hn = std::pow(grid_.spacing(), grid_.dim());
  const Real dwn = std::pow(grid_.freq_spacing(), grid_.dim());
  const Real phys = (values_.abs2().sum()) * hn;
  const Real freq = (coeffs_.abs2().sum()) * dwn;
  if (phys == 0.0 && freq == 0.0) return 0.0;
  return std::abs(phys - freq) / std::max(phys, freq);
}

Real SpectralField::l2_norm() const {
  return std::sqrt(values_.abs2().sum() * std::pow(grid_.spacing(), grid_.dim()));
}

SpectralField propagate(const SpectralField& u0, const SymbolSpec& spec, Real t) {
  if (!(t >= 0.0)) throw validation_error("propagate: t must be nonnegative");
  if (t == 0.0) return u0;
  const ArrayXr sym = evaluate_symbol(spec, u0.grid());
  ArrayXc damped = u0.coeffs() * (-t * sym).exp().cast<Complex>();
  return SpectralField::from_coeffs(u0.grid(), std::move(damped), u0.real_signal());
}

}  // namespace polyheat
