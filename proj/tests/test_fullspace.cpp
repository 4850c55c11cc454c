#include <doctest.h>

#include <cmath>

#include "polyheat/errors.hpp"
#include "polyheat/fullspace.hpp"

using namespace polyheat;

namespace {

// radial closed form for the kernel mass of |w|^(2a) in dimension N:
//   (2 pi^{N/2} / Gamma(N/2)) Gamma(N/(2a)) / (2a)
Real radial_mass(Real alpha, int dim) {
  return 2.0 * std::pow(kPi, dim / 2.0) / std::tgamma(dim / 2.0) *
         std::tgamma(dim / (2.0 * alpha)) / (2.0 * alpha);
}

Grid resolution_grid(const SymbolSpec& spec, Real t, Real h, Real min_extent) {
  const Real w_half = std::pow(std::log(2.0) / t, 1.0 / spec.homogeneity());
  Real extent = std::max(min_extent, 16.0 * kPi / w_half);
  int m = 8;
  while (m < 2.0 * extent / h) m *= 2;
  return Grid(1, extent, m);
}

}  // namespace

TEST_CASE("kernel mass: closed forms and the radial oracle") {
  CHECK(normalization_mass(SymbolSpec::fractional_power(1.0), 1) ==
        doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
  CHECK(normalization_mass(SymbolSpec::fractional_power(2.0), 1) ==
        doctest::Approx(2.0 * std::tgamma(1.25)).epsilon(1e-10));
  CHECK(normalization_mass(SymbolSpec::fractional_power(2.0), 1) ==
        doctest::Approx(1.8128049541).epsilon(1e-9));
  for (const Real alpha : {0.6, 1.0, 2.0, 3.0}) {
    for (const int dim : {1, 2}) {
      CHECK(normalization_mass(SymbolSpec::fractional_power(alpha), dim) ==
            doctest::Approx(radial_mass(alpha, dim)).epsilon(1e-9));
    }
  }
  // the quartic polynomial has the same integrand as alpha = 2
  const auto quartic = SymbolSpec::polynomial(1, {{{4, 0}, 1.0}});
  CHECK(normalization_mass(quartic, 1) ==
        doctest::Approx(2.0 * std::tgamma(1.25)).epsilon(1e-9));
  // separable 2-d quartic: the mass factorizes into the 1-d value squared
  const auto sep = SymbolSpec::polynomial(2, {{{4, 0}, 1.0}, {{0, 4}, 1.0}});
  const Real one_d = 2.0 * std::tgamma(1.25);
  CHECK(normalization_mass(sep, 2) == doctest::Approx(one_d * one_d).epsilon(1e-8));
}

TEST_CASE("degenerate polynomial symbols trigger the divergence signal") {
  // w1^4 alone vanishes on the w2 axis: the kernel mass diverges there
  const auto degenerate = SymbolSpec::polynomial(2, {{{4, 0}, 1.0}});
  CHECK_THROWS_AS(normalization_mass(degenerate, 2), numerical_error);
}

TEST_CASE("rescale factor values and scaling law") {
  CHECK(rescale_factor(SymbolSpec::fractional_power(1.0), 1, 4.0) ==
        doctest::Approx(kTwoPi * 2.0 / std::sqrt(kPi)).epsilon(1e-10));
  CHECK(rescale_factor(SymbolSpec::fractional_power(1.0), 1, 4.0) ==
        doctest::Approx(7.0898154036).epsilon(1e-9));
  CHECK(rescale_factor(SymbolSpec::fractional_power(2.0), 1, 1.0) ==
        doctest::Approx(kTwoPi / (2.0 * std::tgamma(1.25))).epsilon(1e-10));
  const Real c1 = rescale_factor(SymbolSpec::fractional_power(2.0), 1, 3.0);
  const Real c16 = rescale_factor(SymbolSpec::fractional_power(2.0), 1, 48.0);
  CHECK(c16 / c1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(rescale_factor(SymbolSpec::fractional_power(2.0), 1, 0.0), validation_error);
}

TEST_CASE("rescaled profile approaches the datum mass (heat control at t = 100)") {
  const auto spec = SymbolSpec::fractional_power(1.0);
  const auto u0 = InitialDatum::gaussian_with_mass(1, {0.0, 0.0}, 1.0, 1.0);
  CompactWindow window;
  window.lo = {-1.0, 0.0};
  window.hi = {1.0, 0.0};
  const Grid grid = resolution_grid(spec, 100.0, 0.1, 30.0);
  const auto pr = rescaled_profile(u0, spec, 100.0, window, grid);
  CHECK(pr.mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pr.sup_deviation <= 2e-2);
  CHECK_FALSE(pr.under_resolved);
}

TEST_CASE("mass-zero data: rescaled profile decays") {
  const auto spec = SymbolSpec::fractional_power(2.0);
  const auto u0 = InitialDatum::signed_mix(
      1, {{{0.1, 0.0}, 0.3, 1.0}, {{-0.1, 0.0}, 0.3, -1.0}});
  CompactWindow window;
  window.lo = {-2.0, 0.0};
  window.hi = {2.0, 0.0};
  Real prev = 1e30;
  for (const Real t : {1.0, 16.0, 256.0, 4096.0}) {
    const Grid grid = resolution_grid(spec, t, 0.05, 30.0);
    const auto pr = rescaled_profile(u0, spec, t, window, grid);
    CHECK(std::abs(pr.mass) <= 1e-12);
    const Real sup = pr.rescaled.abs().maxCoeff();
    CHECK(sup < prev);
    prev = sup;
  }
  CHECK(prev <= 1e-2);
}

TEST_CASE("indicator datum: deviations strictly decreasing across decades") {
  const auto spec = SymbolSpec::fractional_power(2.0);
  const auto u0 = InitialDatum::bump_indicator(1, {0.0, 0.0}, 0.5, 1.0);
  CompactWindow window;
  window.lo = {-2.0, 0.0};
  window.hi = {2.0, 0.0};
  Real prev = 1e30;
  for (const Real t : {10.0, 100.0, 1000.0}) {
    const Grid grid = resolution_grid(spec, t, 0.02, 30.0);
    const auto pr = rescaled_profile(u0, spec, t, window, grid);
    CHECK(pr.sup_deviation < prev);
    prev = pr.sup_deviation;
  }
}

TEST_CASE("pure-kernel limit: c_t times the kernel value at the origin tends to one") {
  for (const int dim : {1, 2}) {
    for (const Real alpha : {1.0, 2.0}) {
      const auto spec = SymbolSpec::fractional_power(alpha);
      const Real t = 500.0;
      const Real w_half = std::pow(std::log(2.0) / t, 1.0 / (2.0 * alpha));
      const Real extent = 16.0 * kPi / w_half;
      const int m = dim == 1 ? 4096 : 256;
      const Grid grid(dim, extent, m);
      ArrayXc coeffs =
          ArrayXc::Constant(static_cast<Eigen::Index>(grid.size()),
                            Complex(std::pow(kTwoPi, -dim / 2.0), 0.0));
      const auto delta_like = SpectralField::from_coeffs(grid, coeffs, false);
      const auto evolved = propagate(delta_like, spec, t);
      // origin sits at flat index (M/2, M/2)
      const std::size_t center = dim == 1 ? static_cast<std::size_t>(m / 2)
                                          : grid.flat(m / 2, m / 2);
      const Real value = evolved.values()[static_cast<Eigen::Index>(center)].real();
      CHECK(rescale_factor(spec, dim, t) * value == doctest::Approx(1.0).epsilon(1e-2));
    }
  }
}

TEST_CASE("time to positivity: heat flow is immediate, biharmonic dips first") {
  CompactWindow window;
  window.lo = {4.0, 0.0};
  window.hi = {5.0, 0.0};
  const auto bump = InitialDatum::bump_indicator(1, {0.0, 0.0}, 0.25, 1.0);
  std::vector<Real> times;
  for (int j = 0; j < 13; ++j) times.push_back(0.25 * std::pow(2.0, j));

  const auto heat = SymbolSpec::fractional_power(1.0);
  auto grids = [&](const SymbolSpec& s) {
    return [&, s](Real t) { return resolution_grid(s, t, 0.05, 30.0); };
  };
  const auto heat_res = time_to_positivity(bump, heat, window, times, grids(heat));
  REQUIRE(heat_res.time_to_positivity.has_value());
  CHECK(*heat_res.time_to_positivity == times.front());
  CHECK_FALSE(heat_res.negative_before);

  const auto biharmonic = SymbolSpec::fractional_power(2.0);
  const auto bi_res = time_to_positivity(bump, biharmonic, window, times, grids(biharmonic));
  REQUIRE(bi_res.time_to_positivity.has_value());
  CHECK(*bi_res.time_to_positivity > times.front());
  CHECK(bi_res.negative_before);
}

TEST_CASE("time to positivity is monotone under window inclusion") {
  const auto spec = SymbolSpec::fractional_power(2.0);
  const auto bump = InitialDatum::bump_indicator(1, {0.0, 0.0}, 0.25, 1.0);
  std::vector<Real> times;
  for (int j = 0; j < 13; ++j) times.push_back(0.25 * std::pow(2.0, j));
  auto grid_rule = [&](Real t) { return resolution_grid(spec, t, 0.05, 30.0); };

  Real prev_T = 0.0;
  for (const Real hi : {3.0, 4.0, 5.0}) {
    CompactWindow window;
    window.lo = {2.0, 0.0};
    window.hi = {hi, 0.0};
    const auto res = time_to_positivity(bump, spec, window, times, grid_rule);
    REQUIRE(res.time_to_positivity.has_value());
    CHECK(*res.time_to_positivity >= prev_T);
    prev_T = *res.time_to_positivity;
  }
}

TEST_CASE("time to positivity rejects bad inputs") {
  const auto spec = SymbolSpec::fractional_power(2.0);
  CompactWindow window;
  window.lo = {4.0, 0.0};
  window.hi = {5.0, 0.0};
  auto grid_rule = [](Real) { return Grid(1, 30.0, 1024); };

  const auto odd = InitialDatum::signed_mix(
      1, {{{1.0, 0.0}, 0.5, 1.0}, {{-1.0, 0.0}, 0.5, -1.0}});
  std::vector<Real> times{1.0, 2.0, 4.0};
  CHECK_THROWS_AS(time_to_positivity(odd, spec, window, times, grid_rule), validation_error);

  const auto bump = InitialDatum::bump_indicator(1, {0.0, 0.0}, 0.25, 1.0);
  std::vector<Real> not_increasing{1.0, 1.0, 2.0};
  CHECK_THROWS_AS(time_to_positivity(bump, spec, window, not_increasing, grid_rule),
                  validation_error);
}

TEST_CASE("window validation") {
  const Grid grid(1, 10.0, 128);
  CompactWindow window;
  window.lo = {-1.0, 0.0};
  window.hi = {1.0, 0.0};
  CHECK_FALSE(window_indices(window, grid).empty());
  window.hi = {11.0, 0.0};
  CHECK_THROWS_AS(window_indices(window, grid), validation_error);
  window.hi = {-2.0, 0.0};
  CHECK_THROWS_AS(window_indices(window, grid), validation_error);
}

TEST_CASE("under-resolution of the damping kernel is flagged") {
  const auto spec = SymbolSpec::fractional_power(2.0);
  const Grid coarse(1, 10.0, 256);  // at t = 1e6 the kernel is far narrower than pi/R
  CHECK(kernel_halfwidth_samples(spec, coarse, 1e6) < 8);
  const auto u0 = InitialDatum::gaussian_with_mass(1, {0.0, 0.0}, 1.0, 1.0);
  CompactWindow window;
  window.lo = {-1.0, 0.0};
  window.hi = {1.0, 0.0};
  const auto pr = rescaled_profile(u0, spec, 1e6, window, coarse);
  CHECK(pr.under_resolved);
}
