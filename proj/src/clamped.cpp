#include "polyheat/clamped.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>

#include "polyheat/errors.hpp"

namespace polyheat {

MatrixXr bilaplacian_matrix(int mesh) {
  if (mesh < 16) throw validation_error("bilaplacian_matrix: mesh must be >= 16");
  const int n = mesh - 1;
  const Real h = 1.0 / mesh;
  const Real s = 1.0 / (h * h * h * h);
  MatrixXr b = MatrixXr::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    b(i, i) = 6.0 * s;
    if (i > 0) b(i, i - 1) = -4.0 * s;
    if (i + 1 < n) b(i, i + 1) = -4.0 * s;
    if (i > 1) b(i, i - 2) = s;
    if (i + 2 < n) b(i, i + 2) = s;
  }
  b(0, 0) = 7.0 * s;          // ghost reflection u_{-1} = u_1
  b(n - 1, n - 1) = 7.0 * s;  // and u_{M+1} = u_{M-1}
  return b;
}

MatrixXr neg_laplacian_matrix(int mesh) {
  if (mesh < 16) throw validation_error("neg_laplacian_matrix: mesh must be >= 16");
  const int n = mesh - 1;
  const Real h = 1.0 / mesh;
  const Real s = 1.0 / (h * h);
  MatrixXr t = MatrixXr::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = 2.0 * s;
    if (i > 0) t(i, i - 1) = -s;
    if (i + 1 < n) t(i, i + 1) = -s;
  }
  return t;
}

MatrixXr discretize_L_omega(Real omega, int mesh) {
  const Real w2 = omega * omega;
  MatrixXr a = bilaplacian_matrix(mesh);
  a += 2.0 * w2 * neg_laplacian_matrix(mesh);
  a.diagonal().array() += w2 * w2;
  return a;
}

ArrayXr OmegaSpectrum::nodes() const {
  ArrayXr y(mesh - 1);
  for (int i = 1; i < mesh; ++i) y[i - 1] = static_cast<Real>(i) / mesh;
  return y;
}

OmegaSpectrum solve_spectrum(Real omega, int mesh, int n_keep) {
  if (n_keep < 1 || n_keep > mesh - 1) {
    throw validation_error("solve_spectrum: need 1 <= n_keep <= mesh-1");
  }
  const MatrixXr a = discretize_L_omega(std::abs(omega), mesh);
  Eigen::SelfAdjointEigenSolver<MatrixXr> solver(a);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("solve_spectrum: eigensolver failed to converge");
  }
  OmegaSpectrum out;
  out.omega = omega;
  out.mesh = mesh;
  out.mu = solver.eigenvalues().head(n_keep).array();
  const Real h = 1.0 / mesh;
  out.modes = solver.eigenvectors().leftCols(n_keep) / std::sqrt(h);
  for (int j = 0; j < n_keep; ++j) {
    auto col = out.modes.col(j);
    bool flip;
    if (j == 0) {
      flip = col.sum() * h < 0.0;
    } else {
      int i = 0;
      while (i < col.size() - 1 && std::abs(col[i]) < 1e-12 * col.cwiseAbs().maxCoeff()) ++i;
      flip = col[i] < 0.0;
    }
    if (flip) col = -col;
  }
  return out;
}

namespace {

struct CacheKey {
  std::uint64_t omega_bits;
  int mesh;
  int n_keep;
  bool operator<(const CacheKey& o) const {
    if (omega_bits != o.omega_bits) return omega_bits < o.omega_bits;
    if (mesh != o.mesh) return mesh < o.mesh;
    return n_keep < o.n_keep;
  }
};

std::map<CacheKey, std::shared_ptr<const OmegaSpectrum>>& cache_map() {
  static std::map<CacheKey, std::shared_ptr<const OmegaSpectrum>> m;
  return m;
}
std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::shared_ptr<const OmegaSpectrum> cached_spectrum(Real omega, int mesh, int n_keep) {
  const Real key_omega = std::abs(omega);  // the operator depends on omega^2 only
  CacheKey key{};
  std::memcpy(&key.omega_bits, &key_omega, sizeof key.omega_bits);
  key.mesh = mesh;
  key.n_keep = n_keep;
  {
    std::lock_guard lock(cache_mutex());
    auto it = cache_map().find(key);
    if (it != cache_map().end()) return it->second;
  }
  auto computed = std::make_shared<const OmegaSpectrum>(solve_spectrum(key_omega, mesh, n_keep));
  std::lock_guard lock(cache_mutex());
  auto [it, inserted] = cache_map().emplace(key, std::move(computed));
  return it->second;
}

void clear_spectrum_cache() {
  std::lock_guard lock(cache_mutex());
  cache_map().clear();
}

FormEvaluator::FormEvaluator(int mesh)
    : mesh_(mesh), bilap_(bilaplacian_matrix(mesh)), neg_lap_(neg_laplacian_matrix(mesh)) {}

Real FormEvaluator::l2sq(const VectorXr& u) const { return u.squaredNorm() / mesh_; }

Real FormEvaluator::a0(const VectorXr& u) const { return u.dot(bilap_ * u) / mesh_; }

Real FormEvaluator::q(const VectorXr& u) const { return u.dot(neg_lap_ * u) / mesh_; }

Real FormEvaluator::a_omega(const VectorXr& u, Real omega) const {
  const Real w2 = omega * omega;
  return a0(u) + 2.0 * w2 * q(u) + w2 * w2 * l2sq(u);
}

LemmaMuReport verify_lemma_mu(std::span<const Real> omega_grid, int n_max, int mesh) {
  if (omega_grid.empty() || n_max < 1) {
    throw validation_error("verify_lemma_mu: empty grid or n_max < 1");
  }
  for (Real w : omega_grid) {
    const bool has_mirror =
        std::any_of(omega_grid.begin(), omega_grid.end(), [&](Real v) { return v == -w; });
    if (!has_mirror) throw validation_error("verify_lemma_mu: omega grid must be symmetric about 0");
  }

  LemmaMuReport rep;
  rep.omegas.assign(omega_grid.begin(), omega_grid.end());
  std::sort(rep.omegas.begin(), rep.omegas.end());
  rep.n_max = n_max;
  const auto rows = static_cast<Eigen::Index>(rep.omegas.size());
  rep.mu.resize(rows, n_max);
  rep.slack.resize(rows, n_max);

  const auto beam = beam_wavenumbers(n_max);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Real w = rep.omegas[static_cast<std::size_t>(r)];
    const auto coarse = cached_spectrum(w, mesh, n_max);
    const auto fine = cached_spectrum(w, 2 * mesh, n_max);
    for (int n = 0; n < n_max; ++n) {
      rep.mu(r, n) = coarse->mu[n];
      // order-2 stencil: error(mesh) ~ 4/3 |mu_mesh - mu_2mesh|
      rep.slack(r, n) = 10.0 * (4.0 / 3.0) * std::abs(coarse->mu[n] - fine->mu[n]);
    }
  }

  // evenness is exact by construction (matrix sees omega^2); verify anyway
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Real w = rep.omegas[static_cast<std::size_t>(r)];
    const auto mirrored = cached_spectrum(-w, mesh, n_max);
    for (int n = 0; n < n_max; ++n) {
      if (mirrored->mu[n] != rep.mu(r, n)) {
        rep.violations.push_back({n + 1, w, mirrored->mu[n], rep.mu(r, n), 0.0, "even"});
      }
    }
  }

  // strict growth in |omega| along the sorted nonnegative half
  std::vector<Real> half;
  for (Real w : rep.omegas)
    if (w >= 0.0) half.push_back(w);
  for (std::size_t i = 0; i + 1 < half.size(); ++i) {
    const auto lo = cached_spectrum(half[i], mesh, n_max);
    const auto hi = cached_spectrum(half[i + 1], mesh, n_max);
    for (int n = 0; n < n_max; ++n) {
      if (!(hi->mu[n] > lo->mu[n])) {
        rep.violations.push_back(
            {n + 1, half[i + 1], hi->mu[n], lo->mu[n], hi->mu[n] - lo->mu[n], "monotone"});
      }
    }
  }

  // two-sided bound against the beam oracle
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Real w = rep.omegas[static_cast<std::size_t>(r)];
    const Real w2 = w * w;
    for (int n = 0; n < n_max; ++n) {
      const Real an = beam[static_cast<std::size_t>(n)].alpha;
      const Real lower = an + w2 * w2;
      const Real upper = an + 2.0 * std::sqrt(an) * w2 + w2 * w2;
      const Real s = rep.slack(r, n);
      const Real mu = rep.mu(r, n);
      if (mu < lower - s) {
        rep.violations.push_back({n + 1, w, mu, lower, lower - mu, "lower"});
      }
      if (mu > upper + s) {
        rep.violations.push_back({n + 1, w, mu, upper, mu - upper, "upper"});
      }
    }
  }

  // (n pi)^4 <= alpha_n, oracle values
  for (int n = 1; n <= n_max; ++n) {
    const Real lhs = std::pow(n * kPi, 4.0);
    const Real an = beam[static_cast<std::size_t>(n - 1)].alpha;
    if (!(lhs <= an)) rep.violations.push_back({n, 0.0, an, lhs, lhs - an, "weyl"});
  }
  return rep;
}

WeylReport weyl_series(int n_max, Real k) {
  if (!(k > 0.25)) throw validation_error("weyl_series: exponent must exceed 1/4");
  if (n_max < 1) throw validation_error("weyl_series: n_max must be >= 1");
  WeylReport rep;
  rep.n_max = n_max;
  rep.exponent = k;
  const auto beam = beam_wavenumbers(n_max);
  Real acc = 0.0;
  for (const auto& mode : beam) {
    acc += std::pow(mode.alpha, -k);
    rep.partial_sums.push_back(acc);
  }
  // tail over n > n_max: k_n >= (4 ceil(n/2) - 1) pi/2, two roots per bracket
  // (for odd n_max this counts one bracket slot twice, still an upper bound)
  const int m0 = n_max / 2 + 1;
  Real tail = 0.0;
  const Real p = 4.0 * k;
  for (int m = m0; m < m0 + 200000; ++m) {
    const Real term = 2.0 * std::pow((4.0 * m - 1.0) * kPi / 2.0, -p);
    tail += term;
    if (term < 1e-18 * std::max(tail, 1e-300)) break;
  }
  rep.tail_bound = tail;

  Real comparison = 0.0;
  for (int m = 1; m < 400000; ++m) {
    const Real term = 2.0 * std::pow((4.0 * m - 1.0) * kPi / 2.0, -p);
    comparison += term;
    if (term < 1e-18 * comparison) break;
  }
  rep.comparison_sum = comparison;
  rep.bounded_by_comparison = rep.partial_sums.back() + rep.tail_bound <= comparison;
  return rep;
}

SupnormReport supnorm_growth_check(std::span<const Real> omegas, int n_lo, int n_hi, int k,
                                   int mesh) {
  if (n_lo < 1 || n_hi < n_lo) throw validation_error("supnorm_growth_check: bad mode range");
  if (k < 1) throw validation_error("supnorm_growth_check: k must be a positive integer");
  const auto beam = beam_wavenumbers(n_hi);
  SupnormReport rep;
  rep.max_ratio = 0.0;
  rep.min_ratio = std::numeric_limits<Real>::infinity();
  for (Real w : omegas) {
    const auto spec = cached_spectrum(w, mesh, n_hi);
    for (int n = n_lo; n <= n_hi; ++n) {
      const Real sup = spec->modes.col(n - 1).cwiseAbs().maxCoeff();
      const Real an = beam[static_cast<std::size_t>(n - 1)].alpha;
      const Real base = 1.0 + std::pow(std::sqrt(an) + w * w, 2.0);
      const Real env = std::pow(base, k);
      const Real ratio = sup / env;
      rep.samples.push_back({n, w, sup, env, ratio});
      rep.max_ratio = std::max(rep.max_ratio, ratio);
      rep.min_ratio = std::min(rep.min_ratio, ratio);
    }
  }
  return rep;
}

}  // namespace polyheat
