#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "polyheat/errors.hpp"
#include "polyheat/types.hpp"

namespace polyheat {

struct QuadratureOptions {
  Real abs_tol = 1e-12;
  Real rel_tol = 1e-12;
  int max_depth = 48;
};

namespace detail {

// Adaptive Simpson with the standard |S2-S1|/15 error estimate.
template <std::invocable<Real> F>
Real simpson_rec(F&& f, Real a, Real b, Real fa, Real fm, Real fb, Real whole, Real tol,
                 int depth, int max_depth) {
  const Real m = 0.5 * (a + b);
  const Real lm = 0.5 * (a + m);
  const Real rm = 0.5 * (m + b);
  const Real flm = f(lm);
  const Real frm = f(rm);
  const Real left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Real right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Real err = left + right - whole;
  if (depth >= max_depth || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

/// ∫_a^b f, adaptive Simpson.
template <std::invocable<Real> F>
Real integrate(F&& f, Real a, Real b, const QuadratureOptions& opt = {}) {
  if (!(b > a)) return 0.0;
  const Real fa = f(a);
  const Real fb = f(b);
  const Real m = 0.5 * (a + b);
  const Real fm = f(m);
  const Real whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Seed panels keep narrow features from slipping through the first estimate.
  const int panels = 8;
  Real total = 0.0;
  Real tol0 = std::max(opt.abs_tol, opt.rel_tol * std::abs(whole));
  Real x0 = a, f0 = fa;
  for (int p = 1; p <= panels; ++p) {
    const Real x1 = a + (b - a) * static_cast<Real>(p) / panels;
    const Real f1 = (p == panels) ? fb : f(x1);
    const Real xm = 0.5 * (x0 + x1);
    const Real fxm = f(xm);
    const Real s = (x1 - x0) / 6.0 * (f0 + 4.0 * fxm + f1);
    total += detail::simpson_rec(f, x0, x1, f0, fxm, f1, s, tol0 / panels, 0, opt.max_depth);
    x0 = x1;
    f0 = f1;
  }
  return total;
}

/// ∫_0^∞ f for integrands that eventually decay. The domain is truncated where
/// the integrand has fallen below 1e-16 times its observed peak; if no such
/// point exists within the probe range the integral is flagged divergent.
template <std::invocable<Real> F>
Real integrate_half_line(F&& f, const QuadratureOptions& opt = {}) {
  Real peak = std::abs(f(0.0));
  Real cut = 0.0;
  bool found = false;
  for (int j = -30; j <= 64; ++j) {
    const Real x = std::ldexp(1.0, j);
    const Real v = std::abs(f(x));
    if (v > peak) peak = v;
    if (peak > 0.0 && v <= 1e-16 * peak) {
      cut = x;
      found = true;
      break;
    }
  }
  if (!found) {
    if (peak == 0.0) return 0.0;  // identically zero on the probe range
    throw numerical_error("integrate_half_line: integrand tail does not decay");
  }
  return integrate(f, 0.0, cut, opt);
}

/// ∫_R f via two half-lines.
template <std::invocable<Real> F>
Real integrate_real_line(F&& f, const QuadratureOptions& opt = {}) {
  return integrate_half_line([&](Real x) { return f(x); }, opt) +
         integrate_half_line([&](Real x) { return f(-x); }, opt);
}

/// Composite Simpson with `panels` panels.
template <std::invocable<Real> F>
Real integrate_panels(F&& f, Real a, Real b, int panels) {
  const Real h = (b - a) / (2 * panels);
  Real s = f(a) + f(b);
  for (int j = 1; j < 2 * panels; ++j) s += (j % 2 == 1 ? 4.0 : 2.0) * f(a + j * h);
  return s * h / 3.0;
}

/// Nested panel refinement (doubling). Stops at the tolerance, or when the
/// gap between levels stalls: integrands carrying an eigensolver noise floor
/// never meet a tight tolerance, and past the stall further panels only
/// resolve noise. Mesh points are nested, so memoized integrands pay once.
template <std::invocable<Real> F>
Real integrate_refined(F&& f, Real a, Real b, const QuadratureOptions& opt = {}) {
  if (!(b > a)) return 0.0;
  Real prev = integrate_panels(f, a, b, 64);
  Real prev_gap = std::numeric_limits<Real>::infinity();
  Real cur = prev;
  for (int panels = 128; panels <= 65536; panels *= 2) {
    cur = integrate_panels(f, a, b, panels);
    const Real gap = std::abs(cur - prev);
    if (gap <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) return cur;
    if (panels >= 512 && gap >= 0.5 * prev_gap) return cur;
    prev = cur;
    prev_gap = gap;
  }
  return cur;
}

namespace detail {

/// Truncation point for a decaying integrand on [0, inf): first dyadic x with
/// |f| below 1e-16 of the observed peak. Zero when f vanishes on the probe
/// range; throws when the tail never decays.
template <std::invocable<Real> F>
Real half_line_cut(F&& f) {
  Real peak = std::abs(f(0.0));
  for (int j = -30; j <= 64; ++j) {
    const Real x = std::ldexp(1.0, j);
    const Real v = std::abs(f(x));
    if (v > peak) peak = v;
    if (peak > 0.0 && v <= 1e-16 * peak) return x;
  }
  if (peak == 0.0) return 0.0;
  throw numerical_error("half_line_cut: integrand tail does not decay");
}

}  // namespace detail

/// ∫_0^∞ f by truncation plus nested panel refinement.
template <std::invocable<Real> F>
Real integrate_half_line_refined(F&& f, const QuadratureOptions& opt = {}) {
  const Real cut = detail::half_line_cut(f);
  if (cut == 0.0) return 0.0;
  return integrate_refined(f, 0.0, cut, opt);
}

/// Regularized upper incomplete gamma Q(a,x) = Γ(a,x)/Γ(a), a > 0, x ≥ 0.
Real gamma_q(Real a, Real x);

/// log(Σ exp(v_i)) without overflow; -inf for an empty or all -inf input.
Real log_sum_exp(std::span<const Real> v);

/// Least-squares slope of y against x.
Real fit_slope(std::span<const Real> x, std::span<const Real> y);

/// Slope of log(v) vs log(t) over the tail (last `tail_fraction` of the points).
Real fit_loglog_slope(std::span<const Real> t, std::span<const Real> v,
                      Real tail_fraction = 0.5);

/// Same fit, but with log10 values supplied directly (for quantities that underflow).
Real fit_loglog_slope_from_log10(std::span<const Real> t, std::span<const Real> log10_v,
                                 Real tail_fraction = 0.5);

}  // namespace polyheat
