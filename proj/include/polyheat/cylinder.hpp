#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "polyheat/clamped.hpp"
#include "polyheat/initial_data.hpp"
#include "polyheat/spectral_field.hpp"

namespace polyheat {

// Evolution on the strip R x (0,1): partial Fourier transform in x, clamped
// modal expansion in y. All time factors are handled relative to the ground
// eigenvalue alpha_1 = mu_1(0); the shift cancels exactly in every rescaled
// quantity and keeps exp() in range for large t.

/// Initial datum on the strip, sampled on an x box times the interior y nodes.
class CylinderDatum {
 public:
  static CylinderDatum separable(const InitialDatum& fx, std::function<Real(Real)> gy,
                                 const Grid& xgrid, int mesh);
  static CylinderDatum from_values(const Grid& xgrid, int mesh, MatrixXr values);

  const Grid& xgrid() const { return xgrid_; }
  int mesh() const { return mesh_; }
  const MatrixXr& values() const { return values_; }  // Mx rows, mesh-1 cols

  /// Partial transform in x at one frequency: (2 pi)^{-1/2} h_x sum_j u0(x_j, .) e^{-i w x_j}.
  VectorXc uhat0(Real omega) const;

  Real l1l2_norm() const;  // ∫ ||u0(x,.)||_{L2(0,1)} dx, Riemann
  Real l2l2_norm() const;

 private:
  CylinderDatum(Grid xgrid, int mesh, MatrixXr values)
      : xgrid_(xgrid), mesh_(mesh), values_(std::move(values)) {}
  Grid xgrid_;
  int mesh_;
  MatrixXr values_;
};

/// Eigendata and expansion coefficients at one frequency.
struct ModalPoint {
  Real omega = 0.0;
  std::shared_ptr<const OmegaSpectrum> spectrum;
  VectorXc coeffs;  // A_n, n = 1..n_modes
};

/// Per-frequency pipeline: eigensolve (cached), y-projection of the datum,
/// Bessel check. Thread-safe; results are memoized on the exact bit pattern
/// of omega.
class ModalEvaluator {
 public:
  ModalEvaluator(const CylinderDatum& datum, int n_modes);

  const CylinderDatum& datum() const { return datum_; }
  int n_modes() const { return n_modes_; }
  Real alpha1() const { return alpha1_; }
  /// mu_1(omega) - alpha_1, nonnegative, even.
  Real mu1_shifted(Real omega) const;

  struct Point {
    ArrayXr mu;        // raw eigenvalues
    VectorXc coeffs;   // A_n
    std::shared_ptr<const OmegaSpectrum> spectrum;
  };
  const Point& at(Real omega) const;

 private:
  const CylinderDatum& datum_;
  int n_modes_;
  Real alpha1_;
  mutable std::map<std::uint64_t, std::unique_ptr<Point>> memo_;
  mutable std::mutex mutex_;
};

/// Coefficient table over the x-box frequency grid.
struct ModalTable {
  int mesh = 0;
  int n_modes = 0;
  Real alpha1 = 0.0;
  Real sup_uhat_l2 = 0.0;       // sup_omega ||uhat0(omega,.)||
  std::vector<ModalPoint> rows;  // one per box frequency, ascending
  Grid xgrid{1, 1.0, 8};
};

ModalTable build_modal_table(const CylinderDatum& datum, int n_modes);

struct SynthesisResult {
  MatrixXr u;                  // x points (rows) by y nodes (cols)
  Real truncation_bound = 0.0; // sup-norm envelope of the dropped modes (t > 0)
  Real bessel_residual = 0.0;  // max over omega of the L2 modal remainder
  bool truncation_warning = false;
  Real imag_residue = 0.0;
};

/// Sum of the modal series at time t over the box frequencies, evaluated at
/// arbitrary x points and the selected interior y nodes.
SynthesisResult synthesize_solution(const ModalTable& table, const CylinderDatum& datum, Real t,
                                    std::span<const Real> x_points,
                                    std::span<const int> y_indices);

struct CtResult {
  Real log_ct = 0.0;   // log(2 pi) + t alpha_1 - log ∫ e^{-t (mu1 - alpha_1)}
  Real ct = 0.0;       // exp(log_ct); +inf when out of double range
  Real integral_shifted = 0.0;
  Real alpha1 = 0.0;
};

/// Rescaling factor 2 pi / ∫ e^{-t mu1}. The quadrature mesh is refined until
/// the Richardson estimate is below 1e-8 relative; failure to converge within
/// the refinement cap is reported as a numerical error.
CtResult ct_cylinder(const std::function<Real(Real)>& mu1_shifted, Real alpha1, Real t);

struct ProfileRow {
  Real t = 0.0;
  Real sup_deviation = 0.0;  // over the x window and y window
  Real x_flatness = 0.0;     // max over y of (max over x - min over x) of c_t u
  Real log_ct = 0.0;
};

struct CylinderProfileResult {
  Real projection = 0.0;          // ∫∫ u0 e1
  VectorXr e1;                    // principal mode at the selected y nodes
  std::vector<int> y_indices;
  std::vector<Real> x_points;
  std::vector<ProfileRow> rows;
  MatrixXr final_rescaled;        // c_t u at the last scheduled time
};

/// Rescaled profile c_t u against the product target (∫∫ u0 e1) e1(y) on an
/// x interval times a y window, along a time schedule. Frequency quadrature
/// is re-meshed adaptively per t around the concentration at omega = 0.
CylinderProfileResult asymptotic_profile(const CylinderDatum& datum,
                                         std::span<const Real> schedule,
                                         std::array<Real, 2> x_interval, int x_samples,
                                         std::array<Real, 2> y_window, int n_modes);

struct SignPatternResult {
  Real projection = 0.0;
  std::optional<Real> time_to_match;
  std::vector<Real> schedule;
  std::vector<char> all_match;      // per scheduled t
  std::vector<Real> min_agreement;  // min over cells of u * sign(e1); > 0 iff match
  Eigen::MatrixXi final_map;        // sign of u at the last scheduled time
  Eigen::MatrixXi reference_map;    // sign of e1 (broadcast over x)
};

/// First scheduled time after which sgn u = sgn e1 throughout the window for
/// all remaining scheduled times. Requires ∫∫ u0 e1 > 0 and a window clear of
/// the reference zero set. A custom reference sign profile may be supplied to
/// exercise the general sign-matching path.
SignPatternResult sign_pattern(const CylinderDatum& datum, std::span<const Real> schedule,
                               std::array<Real, 2> x_interval, int x_samples,
                               std::array<Real, 2> y_window, int n_modes,
                               const std::function<Real(Real)>* reference = nullptr);

struct RemainderRow {
  Real t = 0.0;
  Real log10_value = 0.0;  // log10 of c_t/(2 pi) * ∫ S(t, omega) d omega
  Real cauchy_increment_log10 = 0.0;  // log10 of the n = 50 term of the envelope series
};

struct RemainderReport {
  std::vector<RemainderRow> rows;
  Real fitted_order = 0.0;        // log-log slope over the schedule tail
  Real spectral_gap = 0.0;        // alpha_2 - alpha_1 (beam oracle)
  std::vector<Real> coeff_partial_sums;  // sum_{n=2}^N (2 + alpha_n^k) / alpha_n^l
  Real coeff_tail_bound = 0.0;
  int coeff_n_for_1e10 = 0;       // first n with increment below 1e-10
};

/// Mode n >= 2 remainder envelope: the discrete eigenvalue curves carry the
/// first few terms, the beam-oracle sandwich bound the analytic tail. Values
/// decay like exp(-t (alpha_2 - alpha_1)) and are reported in log10.
RemainderReport remainder_diagnostic(int mesh, int n_disc, int k, int l,
                                     std::span<const Real> schedule);

}  // namespace polyheat
