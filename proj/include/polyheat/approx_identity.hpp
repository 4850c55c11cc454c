#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "polyheat/numerics.hpp"
#include "polyheat/types.hpp"

namespace polyheat {

/// A t-indexed kernel family that should behave as an approximate identity
/// for large t: nonnegative, unit mass, vanishing tails. For dim 2 the
/// evaluator receives the radius of an isotropic kernel. Families backed by
/// an eigensolver carry its noise floor, so they must relax the integration
/// tolerances below that floor.
struct KernelFamily {
  enum class Normalizer { analytic, quadrature };

  std::function<Real(Real t, Real omega)> evaluator;
  Normalizer normalizer = Normalizer::analytic;
  int dim = 1;
  std::string label;
  QuadratureOptions quad{1e-13, 1e-11, 48};
};

/// ∫ rho_t over the whole space (before renormalization).
Real kernel_mass(const KernelFamily& family, Real t);

/// Mass outside the delta-ball, renormalized to a unit-mass kernel.
Real tail_mass(const KernelFamily& family, Real t, Real delta);

struct ApproxIdentityReport {
  bool nonneg_ok = true;
  bool norm_ok = true;
  bool tails_decreasing = true;
  std::vector<Real> schedule;
  std::vector<Real> deltas;
  MatrixXr tails;  // deltas x schedule
  std::vector<std::string> failures;
  bool ok() const { return nonneg_ok && norm_ok && tails_decreasing; }
};

/// Verifies the three defining properties on a schedule: nonnegativity on a
/// sample grid, unit mass to 1e-8 (after renormalization when the family is
/// quadrature-normalized), and strictly decreasing tail mass per delta.
ApproxIdentityReport check_approx_identity(const KernelFamily& family,
                                           std::span<const Real> deltas,
                                           std::span<const Real> schedule);

struct ConvolutionResult {
  std::vector<Real> schedule;
  std::vector<Real> u_samples;
  MatrixXc values;          // schedule x u_samples, (rho_t reflected * f)(omega0)
  std::vector<Real> sup_deviation;  // per scheduled t, sup over u of |value - f(omega0,u)|
};

/// Convolution against the reflected kernel at a single point omega0 for a
/// parametrized bounded f. Dim 1 only.
ConvolutionResult convolution_limit(const KernelFamily& family,
                                    const std::function<Complex(Real omega, Real u)>& f,
                                    std::span<const Real> u_samples, Real omega0,
                                    std::span<const Real> schedule);

/// Instance of the one-dimensional integral ratio
///   f_a(t) = ∫_0^∞ x^a e^{-t x^n} dx   over   g(t) = ∫_0^∞ e^{-t p(x)} dx
/// with p(x) = sum_{j=k}^m c_j x^j, m >= k >= 1 and c_k, c_m > 0.
struct RatioInstance {
  Real alpha = 0.0;
  int n = 1;
  std::vector<std::pair<int, Real>> poly;  // (degree, coefficient)
  std::string label;

  void validate() const;
  int lowest_degree() const;
  Real poly_at(Real x) const;
  /// Eventual decay exponent of the ratio, 1/k - (alpha+1)/n.
  Real bound_exponent() const;
};

struct RatioRow {
  Real t;
  Real f_closed;  // Gamma((a+1)/n) / n * t^{-(a+1)/n}
  Real f_quad;
  Real g_quad;
  Real ratio;
};

struct RatioReport {
  std::vector<RatioRow> rows;
  Real fitted_slope = 0.0;       // log ratio vs log t over the schedule tail
  Real max_f_disagreement = 0.0; // closed form vs quadrature, relative
};

RatioReport f_over_g_ratio(const RatioInstance& instance, std::span<const Real> schedule);

/// Kernel family e^{-t mu1(omega)} / ∫ e^{-t mu1}, built from a sampled first
/// eigenvalue curve. The curve must be positive and increasing on the probe
/// range (evenness is assumed, the evaluator receives |omega|). The shift by
/// mu1(0) is applied internally so large t cannot underflow.
KernelFamily mu1_family(const std::function<Real(Real)>& mu1, Real probe_max = 4.0);

struct TailDecayReport {
  std::vector<Real> schedule;
  std::vector<Real> tail;      // J_delta(t), actual renormalized tail mass
  std::vector<Real> majorant;  // (1/delta^2) f_2(t) / g(t) with the comparison curve
  Real fitted_majorant_slope = 0.0;  // approaches -1/4
  bool tail_below_majorant = true;
};

/// Tail decay of the mu1 family against the quarter-power majorant
///   J_delta(t) <= delta^{-2} ∫ w^2 e^{-t w^4} dw / ∫ e^{-t(beta w^2 + w^4)} dw,
/// beta = 2 sqrt(mu1(0)). The raw tail decays super-polynomially, so the
/// quarter-power rate is read off the majorant.
TailDecayReport mu1_tail_decay(const std::function<Real(Real)>& mu1, Real delta,
                               std::span<const Real> schedule);

}  // namespace polyheat
