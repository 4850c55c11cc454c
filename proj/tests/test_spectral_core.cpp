#include <doctest.h>

#include <cmath>
#include <random>

#include "polyheat/errors.hpp"
#include "polyheat/spectral_field.hpp"

using namespace polyheat;

namespace {

ArrayXr random_field(const Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<Real> dist(-1.0, 1.0);
  ArrayXr v(static_cast<Eigen::Index>(g.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid(3, 1.0, 64), validation_error);
  CHECK_THROWS_AS(Grid(1, -1.0, 64), validation_error);
  CHECK_THROWS_AS(Grid(1, 1.0, 63), validation_error);
  const Grid g(1, 2.0, 16);
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.omega(0) == doctest::Approx(-8.0 * kPi / 2.0));
  CHECK(g.omega(8) == 0.0);
  CHECK(g.size() == 16);
  CHECK(Grid(2, 2.0, 16).size() == 256);
}

TEST_CASE("constant field transforms to a pure zero-frequency coefficient") {
  const Grid g(1, kPi, 64);
  const auto f = SpectralField::from_real_values(g, ArrayXr::Ones(64));
  const ArrayXc& c = f.coeffs();
  CHECK(std::abs(c[32]) == doctest::Approx(std::sqrt(kTwoPi)).epsilon(1e-13));
  for (int i = 0; i < 64; ++i) {
    if (i != 32) CHECK(std::abs(c[i]) <= 1e-12);
  }
}

TEST_CASE("gaussian transform matches the closed form") {
  const Grid g(1, 20.0, 1024);
  ArrayXr v(1024);
  for (int j = 0; j < 1024; ++j) v[j] = std::exp(-g.x(j) * g.x(j));
  const auto f = SpectralField::from_real_values(g, v);
  Real max_err = 0.0;
  for (int i = 0; i < 1024; ++i) {
    const Real w = g.omega(i);
    const Real exact = std::exp(-w * w / 4.0) / std::sqrt(2.0);
    max_err = std::max(max_err, std::abs(f.coeffs()[i] - Complex(exact, 0.0)));
  }
  CHECK(max_err <= 1e-10);
}

TEST_CASE("round trip and Parseval on random fields") {
  for (const int dim : {1, 2}) {
    const Grid g(dim, 3.0, dim == 1 ? 128 : 32);
    const ArrayXr v = random_field(g, 42);
    const ArrayXc coeffs = forward_transform(g, v.cast<Complex>());
    const ArrayXc back = inverse_transform(g, coeffs);
    CHECK((back - v.cast<Complex>()).abs().maxCoeff() <= 1e-12 * v.abs().maxCoeff());
    const auto f = SpectralField::from_real_values(g, v);
    CHECK(f.parseval_gap() <= 1e-10);
  }
}

TEST_CASE("hermitian symmetry of real-field coefficients") {
  const Grid g(1, 5.0, 64);
  const auto f = SpectralField::from_real_values(g, random_field(g, 7));
  const int m = g.points_per_axis();
  for (int j = 1; j < m / 2; ++j) {
    const Complex plus = f.coeffs()[m / 2 + j];
    const Complex minus = f.coeffs()[m / 2 - j];
    CHECK(std::abs(plus - std::conj(minus)) <= 1e-12);
  }
  CHECK(std::abs(f.coeffs()[0].imag()) <= 1e-12);  // lone lowest frequency stays real
}

TEST_CASE("symbol evaluation") {
  CHECK(SymbolSpec::fractional_power(2.0).value(2.0, 0.0) == doctest::Approx(16.0));
  CHECK(SymbolSpec::fractional_power(0.5).value(3.0) == doctest::Approx(3.0));
  const auto poly = SymbolSpec::polynomial(
      2, {{{4, 0}, 1.0}, {{0, 4}, 1.0}});
  CHECK(poly.value(1.0, 1.0) == doctest::Approx(2.0));
  CHECK(poly.homogeneity() == 4.0);
  CHECK_THROWS_AS(SymbolSpec::fractional_power(0.0), validation_error);
  CHECK_THROWS_AS(SymbolSpec::polynomial(2, {{{4, 0}, 1.0}, {{2, 1}, 1.0}}), validation_error);
  // x1^4 - 3 x1^2 x2^2 + x2^4 is negative on the diagonal: rejected
  CHECK_THROWS_AS(SymbolSpec::polynomial(2, {{{4, 0}, 1.0}, {{2, 2}, -3.0}, {{0, 4}, 1.0}}),
                  validation_error);
  const Grid g(2, 2.0, 16);
  const ArrayXr sampled = evaluate_symbol(poly, g);
  CHECK(sampled.minCoeff() >= 0.0);
}

TEST_CASE("propagation: identity at t = 0 and the gaussian heat evolution") {
  const Grid g(1, 40.0, 2048);
  ArrayXr v(2048);
  for (int j = 0; j < 2048; ++j) v[j] = std::exp(-g.x(j) * g.x(j));
  const auto f = SpectralField::from_real_values(g, v);
  const auto spec = SymbolSpec::fractional_power(1.0);

  const auto same = propagate(f, spec, 0.0);
  CHECK((same.coeffs() - f.coeffs()).abs().maxCoeff() == 0.0);

  const auto evolved = propagate(f, spec, 1.0);
  Real max_err = 0.0;
  for (int j = 0; j < 2048; ++j) {
    const Real x = g.x(j);
    const Real exact = std::exp(-x * x / 5.0) / std::sqrt(5.0);
    max_err = std::max(max_err, std::abs(evolved.real_values()[j] - exact));
  }
  CHECK(max_err <= 1e-8);
}

TEST_CASE("semigroup law and L2 contraction") {
  const Grid g(1, 10.0, 256);
  const auto f = SpectralField::from_real_values(g, random_field(g, 3));
  for (const auto& spec : {SymbolSpec::fractional_power(0.75), SymbolSpec::fractional_power(2.0),
                           SymbolSpec::polynomial(1, {{{4, 0}, 1.0}})}) {
    const auto one = propagate(propagate(f, spec, 0.4), spec, 1.1);
    const auto two = propagate(f, spec, 1.5);
    const Real rel = (one.coeffs() - two.coeffs()).abs().maxCoeff() /
                     two.coeffs().abs().maxCoeff();
    CHECK(rel <= 1e-11);
    CHECK(propagate(f, spec, 2.0).l2_norm() <= f.l2_norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("heat semigroup preserves positivity for alpha = 1") {
  const Grid g(1, 15.0, 512);
  ArrayXr v(512);
  for (int j = 0; j < 512; ++j) {
    const Real x = g.x(j);
    v[j] = std::abs(x) < 2.0 ? 1.0 + 0.5 * std::cos(3.0 * x) : 0.0;
  }
  const auto f = SpectralField::from_real_values(g, v);
  const auto spec = SymbolSpec::fractional_power(1.0);
  for (const Real t : {0.01, 0.1, 1.0, 10.0}) {
    const ArrayXr u = propagate(f, spec, t).real_values();
    CHECK(u.minCoeff() >= -1e-9 * v.maxCoeff());
  }
}

TEST_CASE("real-signal flag guards the imaginary residue") {
  const Grid g(1, 4.0, 64);
  ArrayXc coeffs = ArrayXc::Zero(64);
  coeffs[40] = Complex(1.0, 0.0);  // no hermitian partner: genuinely complex signal
  CHECK_THROWS_AS(SpectralField::from_coeffs(g, coeffs, true), numerical_error);
  CHECK_NOTHROW(SpectralField::from_coeffs(g, coeffs, false));
}
