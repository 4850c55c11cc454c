#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "polyheat/grid.hpp"
#include "polyheat/types.hpp"

namespace polyheat {

/// Initial datum families for the evolution experiments. Every kind can be
/// sampled onto a grid; Gaussian-based kinds also carry closed-form mass and
/// (in one dimension) a closed-form Fourier transform used by oracles.
class InitialDatum {
 public:
  struct GaussianTerm {
    std::array<Real, 2> center{0.0, 0.0};
    Real width = 1.0;      // standard deviation
    Real amplitude = 1.0;  // may be negative in a signed mix
  };

  static InitialDatum gaussian(int dim, std::array<Real, 2> center, Real width, Real amplitude);
  /// Unit-mass Gaussian, amplitude chosen so the integral is exactly `mass`.
  static InitialDatum gaussian_with_mass(int dim, std::array<Real, 2> center, Real width,
                                         Real mass);
  static InitialDatum bump_indicator(int dim, std::array<Real, 2> center, Real radius,
                                     Real amplitude);
  static InitialDatum signed_mix(int dim, std::vector<GaussianTerm> terms);
  /// Rectilinear samples (from CSV). Linear/bilinear interpolation between
  /// nodes, zero outside the sampled box.
  static InitialDatum samples(std::vector<Real> xs, std::vector<Real> ys,
                              std::vector<Real> values);

  int dim() const { return dim_; }
  bool is_smooth() const { return kind_ == Kind::Gaussian || kind_ == Kind::SignedMix; }
  /// Gaussian mixture terms; empty for other kinds.
  const std::vector<GaussianTerm>& gaussian_terms() const { return terms_; }

  Real value(Real x0, Real x1 = 0.0) const;
  ArrayXr sample(const Grid& grid) const;
  Real riemann_mass(const Grid& grid) const;
  std::optional<Real> closed_mass() const;

  /// Closed-form unitary Fourier transform at one frequency (dim 1 only;
  /// empty for sampled data).
  std::optional<Complex> fourier_at(Real omega) const;

  /// Smallest feature length, used to pick grid spacing.
  Real feature_scale() const;
  /// Support radius around the origin that the grid box should cover.
  Real support_extent() const;

  std::string describe() const;

 private:
  enum class Kind { Gaussian, Bump, SignedMix, Samples };
  InitialDatum() = default;

  Kind kind_ = Kind::Gaussian;
  int dim_ = 1;
  std::vector<GaussianTerm> terms_;
  std::array<Real, 2> bump_center_{0.0, 0.0};
  Real bump_radius_ = 1.0;
  Real bump_amplitude_ = 1.0;
  std::vector<Real> sample_xs_, sample_ys_, sample_values_;
};

}  // namespace polyheat
