#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "polyheat/beam.hpp"
#include "polyheat/types.hpp"

namespace polyheat {

// Finite differences for -L_w = D^4 - 2 w^2 D^2 + w^4 on (0,1) with clamped
// ends. Uniform mesh y_i = i/M, interior unknowns i = 1..M-1. The clamped
// condition enters through u_0 = 0 and the ghost reflection u_{-1} = u_1,
// which turns the [1,-4,6,-4,1]/h^4 stencil into a 7 on the first diagonal
// entry and keeps the matrix exactly symmetric.

MatrixXr bilaplacian_matrix(int mesh);      // D^4, pentadiagonal, SPD
MatrixXr neg_laplacian_matrix(int mesh);    // -D^2 with Dirichlet ends, SPD
MatrixXr discretize_L_omega(Real omega, int mesh);  // -L_w as a matrix

/// Lowest eigenpairs of -L_w at one omega. Eigenvectors are orthonormal in
/// the discrete L2 inner product h * dot and sign-fixed: positive mean for
/// n = 1, positive first interior value for n >= 2.
struct OmegaSpectrum {
  Real omega = 0.0;
  int mesh = 0;               // number of mesh intervals; mesh-1 interior nodes
  ArrayXr mu;                 // ascending eigenvalues, n_keep of them
  MatrixXr modes;             // (mesh-1) x n_keep, L2-orthonormal columns

  Real h() const { return 1.0 / mesh; }
  ArrayXr nodes() const;      // interior y coordinates
};

OmegaSpectrum solve_spectrum(Real omega, int mesh, int n_keep);

/// Cache-backed variant keyed by the exact bit pattern of |omega| and the
/// mesh. Sweeps over repeated frequencies reuse the eigensolve.
std::shared_ptr<const OmegaSpectrum> cached_spectrum(Real omega, int mesh, int n_keep);
void clear_spectrum_cache();

/// Discrete quadratic forms on interior grid functions (clamped extension).
///   a0(u) = <Bu, u> h   (squared Laplacian), q(u) = <-Tu, u> h,
///   a_w(u) = a0 + 2 w^2 q + w^4 |u|^2.
class FormEvaluator {
 public:
  explicit FormEvaluator(int mesh);

  int mesh() const { return mesh_; }
  Real l2sq(const VectorXr& u) const;
  Real a0(const VectorXr& u) const;
  Real q(const VectorXr& u) const;
  Real a_omega(const VectorXr& u, Real omega) const;

 private:
  int mesh_;
  MatrixXr bilap_;
  MatrixXr neg_lap_;
};

struct LemmaMuViolation {
  int n;
  Real omega;
  Real value;
  Real bound;
  Real margin;
  const char* which;  // "even", "monotone", "lower", "upper", "weyl"
};

struct LemmaMuReport {
  std::vector<Real> omegas;
  int n_max = 0;
  MatrixXr mu;            // |omegas| x n_max table
  MatrixXr slack;         // Richardson-based slack per entry
  std::vector<LemmaMuViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks evenness, strict growth in |omega|, the two-sided bound
/// alpha_n + w^4 <= mu_n(w) <= alpha_n + 2 sqrt(alpha_n) w^2 + w^4 against the
/// beam oracle (slack = 10x a Richardson error estimate from a mesh-doubled
/// solve), and (n pi)^4 <= alpha_n.
LemmaMuReport verify_lemma_mu(std::span<const Real> omega_grid, int n_max, int mesh);

struct WeylReport {
  int n_max = 0;
  Real exponent = 0.0;                 // k
  std::vector<Real> partial_sums;      // partial sums of alpha_n^{-k}
  Real tail_bound = 0.0;               // bound on the omitted tail
  Real comparison_sum = 0.0;           // 2 (2/pi)^{4k} sum_m (4m-1)^{-4k}
  bool bounded_by_comparison = false;
};

/// Partial sums of sum_n alpha_n^{-k}, k > 1/4, with a tail bound from the
/// bracket k_n >= (4 ceil(n/2) - 1) pi / 2. Each bracket holds two roots, so
/// the comparison series carries a factor 2.
WeylReport weyl_series(int n_max, Real k);

struct SupnormSample {
  int n;
  Real omega;
  Real sup_norm;
  Real envelope;   // [1 + (alpha_n^{1/2} + w^2)^2]^k
  Real ratio;
};

struct SupnormReport {
  std::vector<SupnormSample> samples;
  Real max_ratio = 0.0;
  Real min_ratio = 0.0;
};

/// Ratio of the eigenfunction sup norm to the growth envelope over a sampled
/// (n, omega) range. The theory bounds the ratio by an unspecified constant;
/// the report carries the observed extremes.
SupnormReport supnorm_growth_check(std::span<const Real> omegas, int n_lo, int n_hi, int k,
                                   int mesh);

}  // namespace polyheat
