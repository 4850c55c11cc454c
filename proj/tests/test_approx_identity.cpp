#include <doctest.h>

#include <cmath>

#include "polyheat/approx_identity.hpp"
#include "polyheat/clamped.hpp"
#include "polyheat/errors.hpp"
#include "polyheat/fullspace.hpp"
#include "polyheat/numerics.hpp"

using namespace polyheat;

namespace {

KernelFamily gaussian_family() {
  // t^{1/2} e^{-t w^2} / sqrt(pi): the alpha = 1 scaled damping kernel
  KernelFamily fam;
  fam.dim = 1;
  fam.normalizer = KernelFamily::Normalizer::analytic;
  fam.label = "gaussian";
  fam.evaluator = [](Real t, Real w) {
    return std::sqrt(t / kPi) * std::exp(-t * w * w);
  };
  return fam;
}

}  // namespace

TEST_CASE("gaussian family tails follow the complementary error function") {
  const auto fam = gaussian_family();
  CHECK(tail_mass(fam, 4.0, 1.0) == doctest::Approx(std::erfc(2.0)).epsilon(1e-9));
  CHECK(tail_mass(fam, 4.0, 1.0) == doctest::Approx(4.6777e-3).epsilon(1e-4));
  CHECK(tail_mass(fam, 1.0, 1.0) == doctest::Approx(std::erfc(1.0)).epsilon(1e-9));
  CHECK(tail_mass(fam, 1.0, 1.0) == doctest::Approx(0.15730).epsilon(1e-4));
  // the first scheduled tail dominates all later ones
  for (const Real t : {2.0, 4.0, 8.0, 64.0}) {
    CHECK(tail_mass(fam, t, 1.0) < tail_mass(fam, 1.0, 1.0));
  }
}

TEST_CASE("defining properties verified along a schedule") {
  const auto fam = gaussian_family();
  std::vector<Real> deltas{0.5, 1.0, 2.0};
  std::vector<Real> times{1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const auto rep = check_approx_identity(fam, deltas, times);
  CHECK(rep.ok());
  // unit mass within 1e-8 for every scheduled t is part of norm_ok
  CHECK(rep.norm_ok);
  std::vector<Real> bad_schedule{2.0, 1.0};
  CHECK_THROWS_AS(check_approx_identity(fam, deltas, bad_schedule), validation_error);
}

TEST_CASE("a family losing mass fails the unit-mass property") {
  KernelFamily leaky = gaussian_family();
  leaky.evaluator = [](Real t, Real w) {
    return 0.9 * std::sqrt(t / kPi) * std::exp(-t * w * w);
  };
  std::vector<Real> deltas{1.0};
  std::vector<Real> times{1.0, 2.0};
  const auto rep = check_approx_identity(leaky, deltas, times);
  CHECK_FALSE(rep.norm_ok);
  CHECK_FALSE(rep.failures.empty());
}

TEST_CASE("convolution limit: constants, cosine, and the proof-side bound") {
  const auto fam = gaussian_family();
  std::vector<Real> times{1.0, 2.0, 4.0, 8.0};
  std::vector<Real> us{0.0};

  auto constant = [](Real, Real) { return Complex(3.25, 0.0); };
  const auto rc = convolution_limit(fam, constant, us, 0.0, times);
  for (const Real dev : rc.sup_deviation) CHECK(dev <= 1e-8);

  auto cosine = [](Real w, Real) { return Complex(std::cos(w), 0.0); };
  const auto rcos = convolution_limit(fam, cosine, us, 0.0, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Real exact = std::exp(-1.0 / (4.0 * times[i]));
    CHECK(rcos.values(static_cast<Eigen::Index>(i), 0).real() ==
          doctest::Approx(exact).epsilon(1e-9));
    CHECK(rcos.sup_deviation[i] == doctest::Approx(1.0 - exact).epsilon(1e-7));
  }
  // deviation <= 2 sup|f| tail(delta) + modulus(delta), with measured pieces
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (const Real delta : {0.25, 0.5, 1.0}) {
      const Real tail = tail_mass(fam, times[i], delta);
      Real modulus = 0.0;
      for (int j = -100; j <= 100; ++j) {
        const Real w = delta * j / 100.0;
        modulus = std::max(modulus, std::abs(std::cos(w) - 1.0));
      }
      CHECK(rcos.sup_deviation[i] <= 2.0 * 1.0 * tail + modulus + 1e-8);
    }
  }
}

TEST_CASE("convolution limit reproduces the rescaled-profile mechanism") {
  // f(w, x) = sqrt(2 pi) uhat0(w) e^{iwx} convolved against the kernel family
  // at the origin equals c_t u(t, x); cross-check the quadrature route against
  // the grid transform route
  const auto fam = gaussian_family();
  const auto u0 = InitialDatum::gaussian_with_mass(1, {0.3, 0.0}, 1.0, 1.0);
  auto f = [&](Real w, Real x) {
    return std::sqrt(kTwoPi) * (*u0.fourier_at(w)) * std::exp(Complex(0.0, w * x));
  };
  std::vector<Real> us;
  for (int j = 0; j <= 8; ++j) us.push_back(-1.0 + 0.25 * j);
  std::vector<Real> times{4.0, 16.0, 64.0, 256.0};
  const auto rep = convolution_limit(fam, f, us, 0.0, times);
  CHECK(rep.sup_deviation.back() <= 1e-2);
  for (std::size_t i = 1; i < times.size(); ++i) {
    CHECK(rep.sup_deviation[i] < rep.sup_deviation[i - 1]);
  }

  const auto spec = SymbolSpec::fractional_power(1.0);
  const Real t = times.back();
  const Grid grid(1, 16.0 * kPi / std::sqrt(std::log(2.0) / t), 8192);
  CompactWindow window;
  window.lo = {-1.0, 0.0};
  window.hi = {1.0, 0.0};
  const auto pr = rescaled_profile(u0, spec, t, window, grid);
  for (std::size_t j = 0; j < pr.points.size(); ++j) {
    // window points land on the u-sample lattice used above only at stride;
    // compare where they coincide
    for (std::size_t k = 0; k < us.size(); ++k) {
      if (std::abs(pr.points[j][0] - us[k]) < 1e-9) {
        const Real via_fft = pr.rescaled[static_cast<Eigen::Index>(j)];
        const Real via_quad =
            rep.values(static_cast<Eigen::Index>(times.size() - 1),
                       static_cast<Eigen::Index>(k))
                .real();
        CHECK(via_fft == doctest::Approx(via_quad).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("integral ratio: closed form, quadrature, and decay exponents") {
  RatioInstance cor;
  cor.alpha = 2.0;
  cor.n = 4;
  cor.poly = {{2, 2.0 * std::sqrt(500.563901740)}, {4, 1.0}};
  cor.validate();
  CHECK(cor.bound_exponent() == doctest::Approx(0.5 - 0.75));

  std::vector<Real> times;
  for (int j = 0; j < 9; ++j) times.push_back(std::pow(2.0, j));
  const auto rep = f_over_g_ratio(cor, times);
  CHECK(rep.max_f_disagreement <= 1e-8);
  CHECK(rep.rows.front().f_closed ==
        doctest::Approx(std::tgamma(0.75) / 4.0).epsilon(1e-12));
  CHECK(rep.rows.front().f_closed == doctest::Approx(0.30635417562).epsilon(1e-9));
  CHECK(rep.fitted_slope <= cor.bound_exponent() + 0.05);
  CHECK(rep.fitted_slope == doctest::Approx(-0.25).epsilon(0.2));

  RatioInstance identity;
  identity.alpha = 0.0;
  identity.n = 1;
  identity.poly = {{1, 1.0}};
  const auto rid = f_over_g_ratio(identity, times);
  for (const auto& row : rid.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-9));

  RatioInstance bad;
  bad.alpha = 1.0;
  bad.n = 2;
  bad.poly = {{2, -1.0}};
  CHECK_THROWS_AS(bad.validate(), validation_error);
  std::vector<Real> early{0.5, 1.0};
  CHECK_THROWS_AS(f_over_g_ratio(identity, early), validation_error);
}

TEST_CASE("mu1 families: sandwich closed form and validation") {
  const Real alpha1 = beam_wavenumbers(1)[0].alpha;
  auto lower = [alpha1](Real w) { return alpha1 + std::pow(w, 4.0); };
  const auto fam = mu1_family(lower);
  for (const Real t : {1.0, 4.0, 16.0}) {
    for (const Real delta : {0.4, 0.8}) {
      // substitution s = t w^4 turns the tail into a regularized gamma
      const Real exact = gamma_q(0.25, t * std::pow(delta, 4.0));
      CHECK(tail_mass(fam, t, delta) == doctest::Approx(exact).epsilon(1e-8));
    }
  }
  CHECK(tail_mass(fam, 2.0, 1e-7) == doctest::Approx(1.0).epsilon(1e-5));

  auto flat = [](Real) { return 1.0; };
  CHECK_THROWS_AS(mu1_family(flat), validation_error);
  auto negative = [](Real w) { return -1.0 + w; };
  CHECK_THROWS_AS(mu1_family(negative), validation_error);
}

TEST_CASE("discrete principal eigenvalue drives a quarter-power tail majorant") {
  const int mesh = 48;
  auto mu1 = [&](Real w) { return cached_spectrum(w, mesh, 1)->mu[0]; };
  std::vector<Real> times;
  for (int j = 0; j < 11; ++j) times.push_back(0.05 * std::pow(2.0, j));
  const auto rep = mu1_tail_decay(mu1, 1.0, times);
  CHECK(rep.tail_below_majorant);
  CHECK(rep.fitted_majorant_slope == doctest::Approx(-0.25).epsilon(0.2));
  CHECK(std::abs(rep.fitted_majorant_slope + 0.25) <= 0.05);
  // the true tail decays faster than any power: it drops below the majorant
  CHECK(rep.tail.back() < rep.majorant.back() * 1e-3);
}
