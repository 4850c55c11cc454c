#include "polyheat/approx_identity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyheat/errors.hpp"
#include "polyheat/numerics.hpp"

namespace polyheat {

namespace {

void require_increasing(std::span<const Real> schedule, const char* who) {
  if (schedule.empty()) throw validation_error(std::string(who) + ": empty schedule");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
    if (!(schedule[i] < schedule[i + 1])) {
      throw validation_error(std::string(who) + ": schedule must be strictly increasing");
    }
  }
}

const QuadratureOptions kKernelQuad{1e-13, 1e-11, 48};

}  // namespace

Real kernel_mass(const KernelFamily& family, Real t) {
  if (family.dim == 1) {
    return integrate_half_line_refined([&](Real w) { return family.evaluator(t, w); }, family.quad) +
           integrate_half_line_refined([&](Real w) { return family.evaluator(t, -w); }, family.quad);
  }
  return kTwoPi * integrate_half_line_refined(
                      [&](Real r) { return r * family.evaluator(t, r); }, family.quad);
}

Real tail_mass(const KernelFamily& family, Real t, Real delta) {
  if (!(delta >= 0.0)) throw validation_error("tail_mass: delta must be nonnegative");
  const Real mass = kernel_mass(family, t);
  if (!(mass > 0.0)) throw numerical_error("tail_mass: kernel has no mass");
  Real outside;
  if (family.dim == 1) {
    outside = integrate_half_line_refined(
                  [&](Real s) { return family.evaluator(t, delta + s); }, family.quad) +
              integrate_half_line_refined(
                  [&](Real s) { return family.evaluator(t, -delta - s); }, family.quad);
  } else {
    outside = kTwoPi * integrate_half_line_refined(
                           [&](Real s) { return (delta + s) * family.evaluator(t, delta + s); },
                           family.quad);
  }
  return outside / mass;
}

ApproxIdentityReport check_approx_identity(const KernelFamily& family,
                                           std::span<const Real> deltas,
                                           std::span<const Real> schedule) {
  require_increasing(schedule, "check_approx_identity");
  for (Real d : deltas) {
    if (!(d > 0.0)) throw validation_error("check_approx_identity: deltas must be positive");
  }

  ApproxIdentityReport rep;
  rep.schedule.assign(schedule.begin(), schedule.end());
  rep.deltas.assign(deltas.begin(), deltas.end());
  rep.tails.resize(static_cast<Eigen::Index>(deltas.size()),
                   static_cast<Eigen::Index>(schedule.size()));

  for (std::size_t it = 0; it < schedule.size(); ++it) {
    const Real t = schedule[it];
    // (i) nonnegativity on a sample grid
    for (int j = -400; j <= 400; ++j) {
      const Real w = family.dim == 1 ? j * 0.05 : std::abs(j) * 0.05;
      if (family.evaluator(t, w) < 0.0) {
        rep.nonneg_ok = false;
        std::ostringstream os;
        os << "negative kernel value at t=" << t << ", omega=" << w;
        rep.failures.push_back(os.str());
        break;
      }
    }
    // (ii) unit mass
    const Real mass = kernel_mass(family, t);
    const Real unit_gap = family.normalizer == KernelFamily::Normalizer::analytic
                              ? std::abs(mass - 1.0)
                              : 0.0;  // quadrature mode renormalizes by construction
    if (unit_gap > 1e-8) {
      rep.norm_ok = false;
      std::ostringstream os;
      os << "mass deviates from 1 by " << unit_gap << " at t=" << t;
      rep.failures.push_back(os.str());
    }
    // (iii) tails
    for (std::size_t id = 0; id < deltas.size(); ++id) {
      rep.tails(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(it)) =
          tail_mass(family, t, deltas[id]);
    }
  }

  for (std::size_t id = 0; id < deltas.size(); ++id) {
    for (std::size_t it = 0; it + 1 < schedule.size(); ++it) {
      const Real a = rep.tails(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(it));
      const Real b = rep.tails(static_cast<Eigen::Index>(id), static_cast<Eigen::Index>(it + 1));
      if (!(b < a || (a < 1e-14 && b < 1e-14))) {
        rep.tails_decreasing = false;
        std::ostringstream os;
        os << "tail mass not decreasing for delta=" << deltas[id] << " between t=" << schedule[it]
           << " and t=" << schedule[it + 1];
        rep.failures.push_back(os.str());
      }
    }
  }
  return rep;
}

ConvolutionResult convolution_limit(const KernelFamily& family,
                                    const std::function<Complex(Real omega, Real u)>& f,
                                    std::span<const Real> u_samples, Real omega0,
                                    std::span<const Real> schedule) {
  require_increasing(schedule, "convolution_limit");
  if (family.dim != 1) throw validation_error("convolution_limit: dim 1 only");
  if (u_samples.empty()) throw validation_error("convolution_limit: empty parameter set");

  ConvolutionResult out;
  out.schedule.assign(schedule.begin(), schedule.end());
  out.u_samples.assign(u_samples.begin(), u_samples.end());
  out.values.resize(static_cast<Eigen::Index>(schedule.size()),
                    static_cast<Eigen::Index>(u_samples.size()));
  out.sup_deviation.assign(schedule.size(), 0.0);

  for (std::size_t it = 0; it < schedule.size(); ++it) {
    const Real t = schedule[it];
    const Real mass = kernel_mass(family, t);
    Real sup = 0.0;
    for (std::size_t iu = 0; iu < u_samples.size(); ++iu) {
      const Real u = u_samples[iu];
      // (rho_t reflected * f)(omega0) = ∫ rho_t(w - omega0) f(w, u) dw
      auto integrand_re = [&](Real w) {
        return family.evaluator(t, w - omega0) * f(w, u).real();
      };
      auto integrand_im = [&](Real w) {
        return family.evaluator(t, w - omega0) * f(w, u).imag();
      };
      // center the half-line split on omega0 where the kernel concentrates
      const Real re = integrate_half_line_refined(
                          [&](Real s) { return integrand_re(omega0 + s); }, family.quad) +
                      integrate_half_line_refined(
                          [&](Real s) { return integrand_re(omega0 - s); }, family.quad);
      const Real im = integrate_half_line_refined(
                          [&](Real s) { return integrand_im(omega0 + s); }, family.quad) +
                      integrate_half_line_refined(
                          [&](Real s) { return integrand_im(omega0 - s); }, family.quad);
      const Complex value = Complex(re, im) / mass;
      out.values(static_cast<Eigen::Index>(it), static_cast<Eigen::Index>(iu)) = value;
      sup = std::max(sup, std::abs(value - f(omega0, u)));
    }
    out.sup_deviation[it] = sup;
  }
  return out;
}

void RatioInstance::validate() const {
  if (alpha < 0.0) throw validation_error("RatioInstance: alpha must be >= 0");
  if (n < 1) throw validation_error("RatioInstance: n must be >= 1");
  if (poly.empty()) throw validation_error("RatioInstance: empty polynomial");
  int k = poly.front().first, m = poly.front().first;
  Real ck = 0.0, cm = 0.0;
  for (const auto& [deg, c] : poly) {
    if (deg < 1) throw validation_error("RatioInstance: degrees must be >= 1");
    if (deg < k) { k = deg; }
    if (deg > m) { m = deg; }
  }
  for (const auto& [deg, c] : poly) {
    if (deg == k) ck += c;
    if (deg == m) cm += c;
  }
  if (!(ck > 0.0) || !(cm > 0.0)) {
    throw validation_error("RatioInstance: lowest and highest coefficients must be positive");
  }
}

int RatioInstance::lowest_degree() const {
  int k = poly.front().first;
  for (const auto& [deg, c] : poly) k = std::min(k, deg);
  return k;
}

Real RatioInstance::poly_at(Real x) const {
  Real acc = 0.0;
  for (const auto& [deg, c] : poly) acc += c * std::pow(x, deg);
  return acc;
}

Real RatioInstance::bound_exponent() const {
  return 1.0 / lowest_degree() - (alpha + 1.0) / n;
}

RatioReport f_over_g_ratio(const RatioInstance& instance, std::span<const Real> schedule) {
  instance.validate();
  require_increasing(schedule, "f_over_g_ratio");
  if (!(schedule.front() >= 1.0)) {
    throw validation_error("f_over_g_ratio: schedule must start at t >= 1");
  }
  RatioReport rep;
  std::vector<Real> ts, ratios;
  for (const Real t : schedule) {
    RatioRow row{};
    row.t = t;
    const Real e = (instance.alpha + 1.0) / instance.n;
    row.f_closed = std::tgamma(e) / instance.n * std::pow(t, -e);
    row.f_quad = integrate_half_line(
        [&](Real x) { return std::pow(x, instance.alpha) * std::exp(-t * std::pow(x, instance.n)); },
        kKernelQuad);
    row.g_quad = integrate_half_line(
        [&](Real x) { return std::exp(-t * instance.poly_at(x)); }, kKernelQuad);
    if (!(row.g_quad > 0.0)) throw numerical_error("f_over_g_ratio: denominator vanished");
    row.ratio = row.f_quad / row.g_quad;
    rep.max_f_disagreement =
        std::max(rep.max_f_disagreement, std::abs(row.f_closed - row.f_quad) / row.f_closed);
    rep.rows.push_back(row);
    ts.push_back(t);
    ratios.push_back(row.ratio);
  }
  rep.fitted_slope = fit_loglog_slope(ts, ratios, 0.5);
  return rep;
}

KernelFamily mu1_family(const std::function<Real(Real)>& mu1, Real probe_max) {
  const Real base = mu1(0.0);
  if (!(base > 0.0)) throw validation_error("mu1_family: mu1 must be positive");
  Real prev = base;
  for (int i = 1; i <= 32; ++i) {
    const Real w = probe_max * i / 32.0;
    const Real v = mu1(w);
    if (!(v > prev)) {
      throw validation_error("mu1_family: mu1 must be strictly increasing in |omega|");
    }
    prev = v;
  }
  KernelFamily fam;
  fam.dim = 1;
  fam.normalizer = KernelFamily::Normalizer::quadrature;
  fam.label = "exp(-t mu1)";
  fam.quad = QuadratureOptions{1e-10, 1e-9, 24};
  fam.evaluator = [mu1, base](Real t, Real w) { return std::exp(-t * (mu1(std::abs(w)) - base)); };
  return fam;
}

TailDecayReport mu1_tail_decay(const std::function<Real(Real)>& mu1, Real delta,
                               std::span<const Real> schedule) {
  if (!(delta > 0.0)) throw validation_error("mu1_tail_decay: delta must be positive");
  require_increasing(schedule, "mu1_tail_decay");
  const KernelFamily fam = mu1_family(mu1);
  const Real beta = 2.0 * std::sqrt(mu1(0.0));

  TailDecayReport rep;
  rep.schedule.assign(schedule.begin(), schedule.end());
  std::vector<Real> ts;
  for (const Real t : schedule) {
    rep.tail.push_back(tail_mass(fam, t, delta));
    const Real f2 = integrate_half_line(
        [&](Real w) { return w * w * std::exp(-t * std::pow(w, 4)); }, kKernelQuad);
    const Real g = integrate_half_line(
        [&](Real w) { return std::exp(-t * (beta * w * w + std::pow(w, 4))); }, kKernelQuad);
    rep.majorant.push_back(f2 / (g * delta * delta));
    ts.push_back(t);
  }
  for (std::size_t i = 0; i < rep.tail.size(); ++i) {
    // quadrature floor: tails below ~1e-14 are indistinguishable from zero
    if (rep.tail[i] > rep.majorant[i] + 1e-12) rep.tail_below_majorant = false;
  }
  rep.fitted_majorant_slope = fit_loglog_slope(ts, rep.majorant, 0.5);
  return rep;
}

}  // namespace polyheat
