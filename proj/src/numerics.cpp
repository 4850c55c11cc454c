#include "polyheat/numerics.hpp"

#include <algorithm>
#include <limits>

namespace polyheat {

namespace {

// Lower incomplete gamma by series, x < a+1.
Real gamma_p_series(Real a, Real x) {
  Real ap = a;
  Real sum = 1.0 / a;
  Real del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by continued fraction (modified Lentz), x >= a+1.
Real gamma_q_cf(Real a, Real x) {
  const Real tiny = std::numeric_limits<Real>::min() / 1e-30;
  Real b = x + 1.0 - a;
  Real c = 1.0 / tiny;
  Real d = 1.0 / b;
  Real h = d;
  for (int i = 1; i < 500; ++i) {
    const Real an = -static_cast<Real>(i) * (static_cast<Real>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Real delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

Real gamma_q(Real a, Real x) {
  if (!(a > 0.0) || x < 0.0) throw validation_error("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

Real log_sum_exp(std::span<const Real> v) {
  Real m = -std::numeric_limits<Real>::infinity();
  for (Real x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  Real s = 0.0;
  for (Real x : v) s += std::exp(x - m);
  return m + std::log(s);
}

Real fit_slope(std::span<const Real> x, std::span<const Real> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw validation_error("fit_slope: need two or more paired points");
  }
  const auto n = static_cast<Real>(x.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const Real denom = n * sxx - sx * sx;
  if (denom == 0.0) throw validation_error("fit_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

namespace {

Real tail_fit(std::span<const Real> t, std::span<const Real> logv, Real tail_fraction) {
  if (t.size() != logv.size() || t.size() < 2) {
    throw validation_error("fit_loglog_slope: need two or more points");
  }
  tail_fraction = std::clamp(tail_fraction, 0.0, 1.0);
  std::size_t first = t.size() - std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<Real>(t.size()))));
  std::vector<Real> lt;
  std::vector<Real> lv;
  for (std::size_t i = first; i < t.size(); ++i) {
    lt.push_back(std::log(t[i]));
    lv.push_back(logv[i]);
  }
  return fit_slope(lt, lv);
}

}  // namespace

Real fit_loglog_slope(std::span<const Real> t, std::span<const Real> v, Real tail_fraction) {
  std::vector<Real> lv(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw validation_error("fit_loglog_slope: values must be positive");
    lv[i] = std::log(v[i]);
  }
  return tail_fit(t, lv, tail_fraction);
}

Real fit_loglog_slope_from_log10(std::span<const Real> t, std::span<const Real> log10_v,
                                 Real tail_fraction) {
  std::vector<Real> lv(log10_v.size());
  for (std::size_t i = 0; i < log10_v.size(); ++i) lv[i] = log10_v[i] * std::log(10.0);
  return tail_fit(t, lv, tail_fraction);
}

}  // namespace polyheat
