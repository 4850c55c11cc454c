#include <doctest.h>

#include <cmath>
#include <vector>

#include "polyheat/errors.hpp"
#include "polyheat/numerics.hpp"

using namespace polyheat;

TEST_CASE("adaptive quadrature against closed forms") {
  CHECK(integrate([](Real x) { return std::sin(x); }, 0.0, kPi) == doctest::Approx(2.0).epsilon(1e-12));
  const Real gauss = integrate_half_line([](Real x) { return std::exp(-x * x); });
  CHECK(gauss == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-12));
  const Real quartic = integrate_half_line([](Real x) { return std::exp(-x * x * x * x); });
  CHECK(quartic == doctest::Approx(std::tgamma(1.25)).epsilon(1e-12));
  const Real line = integrate_real_line([](Real x) { return std::exp(-std::abs(x)); });
  CHECK(line == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("half-line quadrature flags non-decaying integrands") {
  CHECK_THROWS_AS(integrate_half_line([](Real) { return 1.0; }), numerical_error);
  CHECK(integrate_half_line([](Real) { return 0.0; }) == 0.0);
}

TEST_CASE("regularized upper incomplete gamma vs quadrature oracle") {
  // Q(a,x) = (1/Gamma(a)) \int_x^inf s^{a-1} e^{-s} ds
  for (const Real a : {0.25, 0.5, 1.0, 2.5, 7.0}) {
    for (const Real x : {0.05, 0.5, 1.0, 4.0, 20.0}) {
      const Real oracle =
          integrate_half_line([&](Real s) { return std::pow(x + s, a - 1.0) * std::exp(-x - s); }) /
          std::tgamma(a);
      CHECK(gamma_q(a, x) == doctest::Approx(oracle).epsilon(1e-10));
    }
  }
  CHECK(gamma_q(0.75, 0.0) == 1.0);
  CHECK_THROWS_AS(gamma_q(-1.0, 1.0), validation_error);
}

TEST_CASE("log_sum_exp handles extreme magnitudes") {
  std::vector<Real> v{-1e6, -1e6 + std::log(2.0)};
  CHECK(log_sum_exp(v) == doctest::Approx(-1e6 + std::log(3.0)).epsilon(1e-12));
  std::vector<Real> empty;
  CHECK(std::isinf(log_sum_exp(empty)));
}

TEST_CASE("log-log slope recovers pure power laws") {
  std::vector<Real> t, v;
  for (int j = 0; j < 12; ++j) {
    const Real tj = std::pow(2.0, j);
    t.push_back(tj);
    v.push_back(3.0 * std::pow(tj, -0.25));
  }
  CHECK(fit_loglog_slope(t, v) == doctest::Approx(-0.25).epsilon(1e-12));
  std::vector<Real> lv;
  for (const Real x : v) lv.push_back(std::log10(x));
  CHECK(fit_loglog_slope_from_log10(t, lv) == doctest::Approx(-0.25).epsilon(1e-12));
}
