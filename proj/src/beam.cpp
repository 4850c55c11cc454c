#include "polyheat/beam.hpp"

#include <cmath>

#include "polyheat/errors.hpp"

namespace polyheat {

namespace {

Real characteristic(Real k) { return std::cos(k) - 1.0 / std::cosh(k); }

Real bisect_root(Real lo, Real hi) {
  Real flo = characteristic(lo);
  Real fhi = characteristic(hi);
  if (!(flo * fhi < 0.0)) throw numerical_error("beam_wavenumbers: bracket without sign change");
  for (int it = 0; it < 120; ++it) {
    const Real mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const Real fm = characteristic(mid);
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

// Raw (unnormalized) clamped-beam shape via decaying exponentials.
//   phi(y) = e^{-ky} + sin(ky) - cos(ky) + eps sin(ky) - (num/D) e^{-k(1-y)} (1 - e^{-2ky})
// with num = e^{-k} + sin k - cos k, D = 1 - e^{-2k} - 2 e^{-k} sin k and
// eps = sigma - 1 = 2 num e^{-k} / D. Exactly zero at both ends.
Real raw_shape(Real k, Real y) {
  const Real num = std::exp(-k) + std::sin(k) - std::cos(k);
  const Real d = 1.0 - std::exp(-2.0 * k) - 2.0 * std::exp(-k) * std::sin(k);
  const Real eps = 2.0 * num * std::exp(-k) / d;
  return std::exp(-k * y) + std::sin(k * y) - std::cos(k * y) + eps * std::sin(k * y) -
         (num / d) * std::exp(-k * (1.0 - y)) * (1.0 - std::exp(-2.0 * k * y));
}

}  // namespace

std::pair<Real, Real> beam_bracket(int m) {
  if (m < 1) throw validation_error("beam_bracket: index must be >= 1");
  return {(4.0 * m - 1.0) * kPi / 2.0, (4.0 * m + 1.0) * kPi / 2.0};
}

std::vector<BeamMode> beam_wavenumbers(int n_max) {
  if (n_max < 1) throw validation_error("beam_wavenumbers: n_max must be >= 1");
  std::vector<BeamMode> modes;
  modes.reserve(static_cast<std::size_t>(n_max));
  for (int m = 1; static_cast<int>(modes.size()) < n_max; ++m) {
    const auto [a, b] = beam_bracket(m);
    // One root hugs each endpoint; the 0.1 offsets give sign-safe brackets
    // for all m (the root-to-endpoint gap is ~2 e^{-k}).
    for (const Real k : {bisect_root(a - 0.1, a + 0.1), bisect_root(b - 0.1, b + 0.1)}) {
      if (static_cast<int>(modes.size()) == n_max) break;
      BeamMode mode;
      mode.index = static_cast<int>(modes.size()) + 1;
      mode.k = k;
      mode.alpha = k * k * k * k;
      const Real num = std::exp(-k) + std::sin(k) - std::cos(k);
      const Real d = 1.0 - std::exp(-2.0 * k) - 2.0 * std::exp(-k) * std::sin(k);
      mode.sigma = 1.0 + 2.0 * num * std::exp(-k) / d;
      // at a characteristic root the raw shape already has unit L2 norm; the
      // orthonormality tests re-derive this by quadrature
      mode.norm = 1.0;
      modes.push_back(mode);
    }
  }
  return modes;
}

Real beam_eigenfunction(const BeamMode& mode, Real y) {
  if (y < 0.0 || y > 1.0) throw validation_error("beam_eigenfunction: y must lie in [0,1]");
  return raw_shape(mode.k, y) / mode.norm;
}

}  // namespace polyheat
