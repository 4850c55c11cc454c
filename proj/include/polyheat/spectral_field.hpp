#pragma once

#include "polyheat/grid.hpp"
#include "polyheat/symbol.hpp"
#include "polyheat/types.hpp"

namespace polyheat {

// Transform convention
// --------------------
// Continuous:  u_hat(w) = (2 pi)^(-N/2) \int u(x) e^{-i w x} dx, the unitary
// normalization. Discretely the integral becomes the Riemann sum over the
// grid, so coeffs[k] = (2 pi)^(-N/2) h^N sum_j u_j e^{-i w_k x_j}, evaluated
// with an FFT. The inverse applies the matching Riemann sum over frequencies;
// the round trip is the identity and discrete Parseval holds with constant 1:
//   sum |u_j|^2 h^N = sum |coeffs_k|^2 (pi/R)^N.

/// Paper-convention discrete Fourier transform of values sampled on the grid.
/// Output is indexed by ascending frequency (see Grid::omega).
ArrayXc forward_transform(const Grid& grid, const ArrayXc& values);

/// Inverse of forward_transform (exact round trip up to rounding).
ArrayXc inverse_transform(const Grid& grid, const ArrayXc& coeffs);

/// A sampled field together with its discrete Fourier coefficients. The two
/// representations are kept consistent; construction from either side fills
/// the other. Instances are immutable.
class SpectralField {
 public:
  static SpectralField from_values(const Grid& grid, ArrayXc values, bool real_signal = false);
  static SpectralField from_real_values(const Grid& grid, const ArrayXr& values);
  static SpectralField from_coeffs(const Grid& grid, ArrayXc coeffs, bool real_signal = false);

  const Grid& grid() const { return grid_; }
  const ArrayXc& values() const { return values_; }
  const ArrayXc& coeffs() const { return coeffs_; }
  bool real_signal() const { return real_signal_; }

  ArrayXr real_values() const { return values_.real(); }

  /// Relative discrete Parseval defect (zero up to rounding by construction).
  Real parseval_gap() const;

  /// L2 norm of the sampled values, sqrt(sum |u|^2 h^N).
  Real l2_norm() const;

 private:
  SpectralField(Grid grid, ArrayXc values, ArrayXc coeffs, bool real_signal)
      : grid_(grid), values_(std::move(values)), coeffs_(std::move(coeffs)),
        real_signal_(real_signal) {}

  Grid grid_;
  ArrayXc values_;
  ArrayXc coeffs_;
  bool real_signal_;
};

/// Evolves the field: coefficients are damped by exp(-t * symbol(w)) and the
/// sampled values refreshed by the inverse transform. For fields flagged as
/// real signals the imaginary residue after inversion must stay below
/// 1e-10 relative to the field scale; it is then discarded.
SpectralField propagate(const SpectralField& u0, const SymbolSpec& spec, Real t);

}  // namespace polyheat
