#include <doctest.h>

#include <cmath>
#include <random>

#include "polyheat/clamped.hpp"
#include "polyheat/errors.hpp"

using namespace polyheat;

namespace {

// smooth random grid function with clamped behaviour at both ends
VectorXr clamped_test_function(int mesh, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<Real> dist(-1.0, 1.0);
  const Real a = dist(rng), b = dist(rng), c = dist(rng);
  VectorXr u(mesh - 1);
  for (int i = 1; i < mesh; ++i) {
    const Real y = static_cast<Real>(i) / mesh;
    const Real envelope = y * y * (1.0 - y) * (1.0 - y);
    u[i - 1] = envelope * (a + b * std::sin(5.0 * y) + c * y * y);
  }
  return u;
}

}  // namespace

TEST_CASE("operator assembly identities") {
  const int mesh = 64;
  const MatrixXr a0 = discretize_L_omega(0.0, mesh);
  const MatrixXr a2 = discretize_L_omega(2.0, mesh);
  const MatrixXr diff = a2 - a0 - 2.0 * 4.0 * neg_laplacian_matrix(mesh) -
                        16.0 * MatrixXr::Identity(mesh - 1, mesh - 1);
  CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
  CHECK((a2 - a2.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(discretize_L_omega(-2.0, mesh) == a2);
}

TEST_CASE("lowest eigenvalue converges at second order to the beam value") {
  const Real alpha1 = beam_wavenumbers(1)[0].alpha;
  const Real e200 = std::abs(solve_spectrum(0.0, 200, 1).mu[0] - alpha1);
  const Real e400 = std::abs(solve_spectrum(0.0, 400, 1).mu[0] - alpha1);
  CHECK(e400 / alpha1 <= 0.01);
  CHECK(e200 / e400 >= 3.5);
}

TEST_CASE("spectra: orthonormality, ordering, evenness, sign convention") {
  const auto s = solve_spectrum(2.0, 128, 6);
  const Real h = s.h();
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const Real inner = s.modes.col(i).dot(s.modes.col(j)) * h;
      CHECK(std::abs(inner - (i == j ? 1.0 : 0.0)) <= 1e-10);
    }
    if (i > 0) CHECK(s.mu[i] > s.mu[i - 1]);
    CHECK(s.mu[i] > 0.0);
  }
  const auto mirrored = solve_spectrum(-2.0, 128, 6);
  CHECK((mirrored.mu == s.mu).all());
  CHECK(s.modes.col(0).sum() * h > 0.0);
  CHECK(s.modes(0, 1) > 0.0);
}

TEST_CASE("sandwich bound at omega = 2 against the beam oracle") {
  const int mesh = 200;
  const auto beam = beam_wavenumbers(5);
  const auto coarse = solve_spectrum(2.0, mesh, 5);
  const auto fine = solve_spectrum(2.0, 2 * mesh, 5);
  for (int n = 0; n < 5; ++n) {
    const Real slack = 10.0 * (4.0 / 3.0) * std::abs(coarse.mu[n] - fine.mu[n]);
    const Real an = beam[static_cast<std::size_t>(n)].alpha;
    CHECK(coarse.mu[n] >= an + 16.0 - slack);
    CHECK(coarse.mu[n] <= an + 8.0 * std::sqrt(an) + 16.0 + slack);
  }
}

TEST_CASE("quadratic forms: ordering, Cauchy-Schwarz chain, Rayleigh consistency") {
  const int mesh = 96;
  const FormEvaluator forms(mesh);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const VectorXr u = clamped_test_function(mesh, seed);
    const Real a0 = forms.a0(u);
    const Real q = forms.q(u);
    const Real l2 = forms.l2sq(u);
    CHECK(a0 <= forms.a_omega(u, 1.7));
    CHECK(q <= std::sqrt(a0 * l2) * (1.0 + 1e-12));
    CHECK(forms.a_omega(u, 0.0) == a0);
  }
  const auto s = solve_spectrum(1.3, mesh, 4);
  const Real h = s.h();
  for (int n = 0; n < 4; ++n) {
    const VectorXr phi = s.modes.col(n);
    CHECK(std::sqrt(forms.a0(phi)) <= std::sqrt(s.mu[n]) * (1.0 + 5.0 * h * h));
    // form value of an eigenvector is its eigenvalue, up to O(|A| eps) roundoff
    CHECK(forms.a_omega(phi, 1.3) == doctest::Approx(s.mu[n]).epsilon(1e-8));
  }
}

TEST_CASE("squared-Laplacian form is equivalent to the discrete H2 norm, mesh-stably") {
  Real lo = 1e30, hi = 0.0;
  for (const int mesh : {64, 128, 256}) {
    const FormEvaluator forms(mesh);
    for (unsigned seed = 0; seed < 10; ++seed) {
      const VectorXr u = clamped_test_function(mesh, seed);
      const Real h2 = forms.l2sq(u) + forms.q(u) + forms.a0(u);
      const Real ratio = forms.a0(u) / h2;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  CHECK(lo > 1e-3);  // coercivity constant bounded away from zero
  CHECK(hi <= 1.0);  // and the form never exceeds the full norm
}

TEST_CASE("eigenvalue curves: continuity under refinement, no crossings, monotone") {
  const int mesh = 96;
  Real prev_jump = 0.0;
  for (const Real delta : {0.2, 0.1, 0.05}) {
    Real max_jump = 0.0;
    for (Real w = 0.0; w < 4.0 - 1e-9; w += delta) {
      const auto a = cached_spectrum(w, mesh, 3);
      const auto b = cached_spectrum(w + delta, mesh, 3);
      for (int n = 0; n < 3; ++n) {
        max_jump = std::max(max_jump, std::abs(b->mu[n] - a->mu[n]));
        CHECK(b->mu[n] > a->mu[n]);  // strict growth in |omega|
      }
      CHECK(a->mu[1] - a->mu[0] > 1.0);  // labels stay separated: no crossing
      CHECK(a->mu[2] - a->mu[1] > 1.0);
    }
    if (prev_jump > 0.0) CHECK(max_jump < prev_jump);  // jumps shrink with the step
    prev_jump = max_jump;
  }
}

TEST_CASE("verify_lemma_mu passes on a symmetric sweep and rejects asymmetric grids") {
  std::vector<Real> grid;
  for (Real w = -2.0; w <= 2.0 + 1e-12; w += 0.5) grid.push_back(w);
  const auto rep = verify_lemma_mu(grid, 3, 64);
  CHECK(rep.ok());
  std::vector<Real> bad{0.0, 0.5, 1.0};
  CHECK_THROWS_AS(verify_lemma_mu(bad, 3, 64), validation_error);
}

TEST_CASE("weyl series: frozen oracle values and the bracket-pair bound") {
  const auto rep = weyl_series(20, 1.0);
  // partial sum of alpha_n^{-1} over the first 20 beam eigenvalues
  CHECK(rep.partial_sums.back() == doctest::Approx(0.00238058329317).epsilon(1e-9));
  CHECK(rep.partial_sums.front() == doctest::Approx(1.0 / 500.563901740).epsilon(1e-10));
  CHECK(rep.tail_bound > 0.0);
  CHECK(rep.tail_bound < 1e-5);
  CHECK(rep.bounded_by_comparison);
  CHECK_THROWS_AS(weyl_series(10, 0.25), validation_error);
}

TEST_CASE("supnorm growth ratio is bounded and mesh-stable") {
  std::vector<Real> omegas;
  for (Real w = 0.0; w <= 3.0 + 1e-12; w += 0.5) omegas.push_back(w);
  const auto coarse = supnorm_growth_check(omegas, 1, 10, 1, 120);
  const auto fine = supnorm_growth_check(omegas, 1, 10, 1, 240);
  CHECK(coarse.max_ratio > 0.0);
  CHECK(std::isfinite(coarse.max_ratio / coarse.min_ratio));
  CHECK(std::abs(fine.max_ratio - coarse.max_ratio) <= 0.1 * coarse.max_ratio);
}

TEST_CASE("cache reuses eigensolves and the results are deterministic") {
  clear_spectrum_cache();
  const auto a = cached_spectrum(1.25, 64, 4);
  const auto b = cached_spectrum(1.25, 64, 4);
  CHECK(a.get() == b.get());
  const auto mirrored = cached_spectrum(-1.25, 64, 4);
  CHECK(mirrored.get() == a.get());  // keyed on |omega|
  const auto direct1 = solve_spectrum(1.25, 64, 4);
  const auto direct2 = solve_spectrum(1.25, 64, 4);
  CHECK((direct1.mu == direct2.mu).all());
  CHECK(direct1.modes == direct2.modes);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_spectrum(0.0, 64, 0), validation_error);
  CHECK_THROWS_AS(solve_spectrum(0.0, 64, 64), validation_error);
  CHECK_THROWS_AS(bilaplacian_matrix(8), validation_error);
  CHECK_THROWS_AS(supnorm_growth_check(std::vector<Real>{1.0}, 2, 1, 1, 64), validation_error);
}
