#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "polyheat/initial_data.hpp"
#include "polyheat/spectral_field.hpp"

namespace polyheat {

/// Closed box strictly inside the grid domain on which profiles are examined.
struct CompactWindow {
  int dim = 1;
  std::array<Real, 2> lo{-1.0, 0.0};
  std::array<Real, 2> hi{1.0, 0.0};
  int stride = 1;
};

/// Flattened grid indices inside the window. Rejects windows that touch or
/// leave the box, or that contain no grid point.
std::vector<std::size_t> window_indices(const CompactWindow& window, const Grid& grid);

/// ∫ exp(-symbol), the normalizing mass of the damping kernel. Radial
/// quadrature for fractional powers, iterated line quadrature for
/// polynomials. Throws when the tail fails to decay (non-coercive symbol).
Real normalization_mass(const SymbolSpec& spec, int dim);

/// Rescaling factor c_t = (2 pi)^N t^{N/s} / normalization_mass with s the
/// symbol homogeneity, chosen so that c_t u(t, x) approaches the datum mass.
Real rescale_factor(const SymbolSpec& spec, int dim, Real t);

/// Number of frequency samples across the half-maximum width of
/// exp(-t symbol); fewer than 8 means the propagator is under-resolved.
int kernel_halfwidth_samples(const SymbolSpec& spec, const Grid& grid, Real t);

struct ProfileResult {
  Real t = 0.0;
  Real ct = 0.0;
  Real mass = 0.0;  // Riemann mass of the sampled datum, the deviation target
  Real sup_deviation = 0.0;
  Real min_on_window = 0.0;
  std::vector<std::array<Real, 2>> points;
  ArrayXr rescaled;  // c_t u at the window points
  bool under_resolved = false;
};

/// Propagates the datum to time t and rescales: c_t u(t, .) on the window,
/// with the sup deviation from the datum mass.
ProfileResult rescaled_profile(const InitialDatum& u0, const SymbolSpec& spec, Real t,
                               const CompactWindow& window, const Grid& grid);

struct PositivityResult {
  std::optional<Real> time_to_positivity;
  std::vector<Real> schedule;
  std::vector<Real> min_values;  // min over the window per scheduled time
  bool negative_before = false;  // some earlier scheduled time dipped below zero
};

/// First scheduled time after which the solution stays positive on the window
/// for every remaining scheduled time. Requires positive datum mass and a
/// strictly increasing schedule; the grid may depend on t (resolution grows
/// with the kernel concentration).
PositivityResult time_to_positivity(const InitialDatum& u0, const SymbolSpec& spec,
                                    const CompactWindow& window, std::span<const Real> schedule,
                                    const std::function<Grid(Real)>& grid_for_t);

}  // namespace polyheat
