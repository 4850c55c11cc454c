#include "polyheat/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "polyheat/errors.hpp"
#include "polyheat/numerics.hpp"

namespace polyheat {

namespace {

constexpr Real kLogCut = 45.0;  // exp(-45) ~ 3e-20, beyond any tolerance here

std::vector<int> window_node_indices(int mesh, std::array<Real, 2> y_window) {
  if (!(y_window[0] < y_window[1]) || y_window[0] <= 0.0 || y_window[1] >= 1.0) {
    throw validation_error("cylinder: y window must be a subinterval of (0,1)");
  }
  std::vector<int> idx;
  for (int i = 1; i < mesh; ++i) {
    const Real y = static_cast<Real>(i) / mesh;
    if (y >= y_window[0] && y <= y_window[1]) idx.push_back(i - 1);
  }
  if (idx.empty()) throw validation_error("cylinder: no mesh node inside the y window");
  return idx;
}

std::vector<Real> uniform_points(std::array<Real, 2> interval, int count) {
  if (!(interval[0] < interval[1]) || count < 2) {
    throw validation_error("cylinder: bad sample interval");
  }
  std::vector<Real> pts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    pts[static_cast<std::size_t>(i)] =
        interval[0] + (interval[1] - interval[0]) * i / (count - 1);
  }
  return pts;
}

void require_increasing(std::span<const Real> schedule, const char* who) {
  if (schedule.empty()) throw validation_error(std::string(who) + ": empty schedule");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
    if (!(schedule[i] < schedule[i + 1])) {
      throw validation_error(std::string(who) + ": schedule must be strictly increasing");
    }
  }
}

}  // namespace

CylinderDatum CylinderDatum::separable(const InitialDatum& fx, std::function<Real(Real)> gy,
                                       const Grid& xgrid, int mesh) {
  if (xgrid.dim() != 1) throw validation_error("CylinderDatum: x grid must be one-dimensional");
  if (fx.dim() != 1) throw validation_error("CylinderDatum: x factor must be one-dimensional");
  if (mesh < 16) throw validation_error("CylinderDatum: mesh must be >= 16");
  const ArrayXr fvals = fx.sample(xgrid);
  MatrixXr vals(xgrid.points_per_axis(), mesh - 1);
  for (int i = 1; i < mesh; ++i) {
    const Real g = gy(static_cast<Real>(i) / mesh);
    if (!std::isfinite(g)) throw validation_error("CylinderDatum: y profile must be finite");
    vals.col(i - 1) = fvals.matrix() * g;
  }
  return CylinderDatum(xgrid, mesh, std::move(vals));
}

CylinderDatum CylinderDatum::from_values(const Grid& xgrid, int mesh, MatrixXr values) {
  if (xgrid.dim() != 1) throw validation_error("CylinderDatum: x grid must be one-dimensional");
  if (mesh < 16) throw validation_error("CylinderDatum: mesh must be >= 16");
  if (values.rows() != xgrid.points_per_axis() || values.cols() != mesh - 1) {
    throw validation_error("CylinderDatum: sample matrix shape mismatch");
  }
  if (!values.array().isFinite().all()) {
    throw validation_error("CylinderDatum: samples must be finite");
  }
  return CylinderDatum(xgrid, mesh, std::move(values));
}

VectorXc CylinderDatum::uhat0(Real omega) const {
  const int mx = xgrid_.points_per_axis();
  const Real hx = xgrid_.spacing();
  VectorXc phases(mx);
  const Complex i(0.0, 1.0);
  for (int j = 0; j < mx; ++j) phases[j] = std::exp(-i * omega * xgrid_.x(j));
  return (values_.transpose() * phases) * (hx / std::sqrt(kTwoPi));
}

Real CylinderDatum::l1l2_norm() const {
  const Real hy = 1.0 / mesh_;
  const Real hx = xgrid_.spacing();
  Real acc = 0.0;
  for (int j = 0; j < values_.rows(); ++j) {
    acc += std::sqrt(values_.row(j).squaredNorm() * hy) * hx;
  }
  return acc;
}

Real CylinderDatum::l2l2_norm() const {
  return std::sqrt(values_.squaredNorm() / mesh_ * xgrid_.spacing());
}

ModalEvaluator::ModalEvaluator(const CylinderDatum& datum, int n_modes)
    : datum_(datum), n_modes_(n_modes) {
  if (n_modes < 1 || n_modes > datum.mesh() - 1) {
    throw validation_error("ModalEvaluator: need 1 <= n_modes <= mesh-1");
  }
  alpha1_ = cached_spectrum(0.0, datum.mesh(), 1)->mu[0];
}

Real ModalEvaluator::mu1_shifted(Real omega) const {
  return cached_spectrum(omega, datum_.mesh(), 1)->mu[0] - alpha1_;
}

const ModalEvaluator::Point& ModalEvaluator::at(Real omega) const {
  const Real key_omega = std::abs(omega);
  std::uint64_t key;
  std::memcpy(&key, &key_omega, sizeof key);
  {
    std::lock_guard lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return *it->second;
  }
  auto point = std::make_unique<Point>();
  point->spectrum = cached_spectrum(key_omega, datum_.mesh(), n_modes_);
  point->mu = point->spectrum->mu;
  const VectorXc uhat = datum_.uhat0(key_omega);
  const Real hy = 1.0 / datum_.mesh();
  point->coeffs = (point->spectrum->modes.transpose() * uhat) * hy;
  // Bessel: the projection cannot exceed the transformed datum
  const Real lhs = point->coeffs.squaredNorm();
  const Real rhs = uhat.squaredNorm() * hy;
  if (lhs > rhs + 1e-8) {
    throw numerical_error("ModalEvaluator: modal coefficients violate the Bessel bound");
  }
  std::lock_guard lock(mutex_);
  auto [it, inserted] = memo_.emplace(key, std::move(point));
  return *it->second;
}

ModalTable build_modal_table(const CylinderDatum& datum, int n_modes) {
  ModalEvaluator eval(datum, n_modes);
  ModalTable table;
  table.mesh = datum.mesh();
  table.n_modes = n_modes;
  table.alpha1 = eval.alpha1();
  table.xgrid = datum.xgrid();
  const int mx = datum.xgrid().points_per_axis();
  table.rows.reserve(static_cast<std::size_t>(mx));
  Real sup = 0.0;
  for (int i = 0; i < mx; ++i) {
    const Real w = datum.xgrid().omega(i);
    const auto& p = eval.at(w);
    ModalPoint row;
    row.omega = w;
    row.spectrum = p.spectrum;
    row.coeffs = p.coeffs;
    if (w < 0.0) row.coeffs = row.coeffs.conjugate();  // A_n(-w) = conj A_n(w), real datum
    table.rows.push_back(std::move(row));
    sup = std::max(sup, std::sqrt(datum.uhat0(w).squaredNorm() / datum.mesh()));
  }
  table.sup_uhat_l2 = sup;
  return table;
}

namespace {

// Sup-norm envelope of the dropped modes for t > 0, built from the sandwich
// lower bound mu_n >= alpha_n + w^4 and the eigenfunction growth envelope
// with k = 1. The constant is the observed sup/envelope ratio at mode
// n_modes+1 .. padded by 2x.
Real truncation_envelope(const ModalTable& table, const CylinderDatum& datum, Real t) {
  const int n_have = table.n_modes;
  const auto beam = beam_wavenumbers(n_have + 60);
  // observed envelope constant at omega = 0
  const auto probe = cached_spectrum(0.0, datum.mesh(), std::min(datum.mesh() - 1, n_have + 4));
  Real chat = 0.0;
  for (int n = 0; n < probe->mu.size(); ++n) {
    const Real an = beam[static_cast<std::size_t>(n)].alpha;
    const Real env = 1.0 + std::pow(std::sqrt(an), 2.0);
    chat = std::max(chat, probe->modes.col(n).cwiseAbs().maxCoeff() / env);
  }
  chat *= 2.0;
  const Real dw = table.xgrid.freq_spacing();
  Real acc = 0.0;
  for (const auto& row : table.rows) {
    const Real w4 = std::pow(row.omega, 4.0);
    Real sum_n = 0.0;
    for (int n = n_have; n < n_have + 60; ++n) {
      const Real an = beam[static_cast<std::size_t>(n)].alpha;
      const Real expo = t * (an + w4 - table.alpha1);
      if (expo > 700.0) break;  // terms are increasing in n inside exp
      sum_n += (1.0 + an + w4) * std::exp(-t * (an + w4 - table.alpha1));
    }
    acc += sum_n * dw;
  }
  const Real shift = t * table.alpha1 > 700.0 ? 0.0 : std::exp(-t * table.alpha1);
  return chat * table.sup_uhat_l2 * acc * shift / std::sqrt(kTwoPi);
}

}  // namespace

SynthesisResult synthesize_solution(const ModalTable& table, const CylinderDatum& datum, Real t,
                                    std::span<const Real> x_points,
                                    std::span<const int> y_indices) {
  if (!(t >= 0.0)) throw validation_error("synthesize_solution: t must be nonnegative");
  if (table.n_modes > datum.mesh() - 1) {
    throw validation_error("synthesize_solution: more modes than interior nodes");
  }
  const auto nx = static_cast<Eigen::Index>(x_points.size());
  const auto ny = static_cast<Eigen::Index>(y_indices.size());
  const Real dw = table.xgrid.freq_spacing();
  MatrixXc acc = MatrixXc::Zero(nx, ny);
  Real bessel = 0.0;

  const Real scale_shift = t * table.alpha1 > 700.0 ? 0.0 : std::exp(-t * table.alpha1);
  for (const auto& row : table.rows) {
    // eta(t, w, y) = sum_n e^{-t mu_n} A_n phi_n(y), shifted by alpha_1
    VectorXc eta = VectorXc::Zero(ny);
    for (int n = 0; n < table.n_modes; ++n) {
      const Real expo = t * (row.spectrum->mu[n] - table.alpha1);
      if (expo > kLogCut * 16.0) continue;
      const Complex an = row.coeffs[n] * std::exp(-expo);
      for (Eigen::Index jy = 0; jy < ny; ++jy) {
        eta[jy] += an * row.spectrum->modes(y_indices[static_cast<std::size_t>(jy)], n);
      }
    }
    const Complex i(0.0, 1.0);
    for (Eigen::Index jx = 0; jx < nx; ++jx) {
      const Complex phase = std::exp(i * row.omega * x_points[static_cast<std::size_t>(jx)]);
      acc.row(jx) += (phase * dw / std::sqrt(kTwoPi)) * eta.transpose();
    }
    const Real rhs = datum.uhat0(row.omega).squaredNorm() / datum.mesh();
    bessel = std::max(bessel, std::max(0.0, rhs - row.coeffs.squaredNorm()));
  }

  SynthesisResult out;
  out.u = scale_shift * acc.real();
  out.imag_residue = scale_shift * acc.imag().cwiseAbs().maxCoeff();
  out.bessel_residual = std::sqrt(bessel);
  out.truncation_bound = t > 0.0 ? truncation_envelope(table, datum, t) : out.bessel_residual;
  const Real umax = out.u.cwiseAbs().maxCoeff();
  out.truncation_warning = out.truncation_bound > 1e-6 * std::max(umax, 1e-300);
  return out;
}

CtResult ct_cylinder(const std::function<Real(Real)>& mu1_shifted, Real alpha1, Real t) {
  if (!(t > 0.0)) throw validation_error("ct_cylinder: t must be positive");
  // window: integrand e^{-t mu~} below e^{-kLogCut} past W
  Real w_hi = 1.0;
  int guard = 0;
  while (t * mu1_shifted(w_hi) < kLogCut && guard++ < 80) w_hi *= 2.0;
  if (guard >= 80) throw numerical_error("ct_cylinder: eigenvalue curve does not grow");
  // composite Simpson with doubling until the Richardson gap clears 1e-8
  auto simpson = [&](int panels) {
    const Real h = w_hi / (2 * panels);
    Real s = mu1_shifted(0.0) == 0.0 ? 1.0 : std::exp(-t * mu1_shifted(0.0));
    s += std::exp(-t * mu1_shifted(w_hi));
    for (int j = 1; j < 2 * panels; ++j) {
      s += (j % 2 == 1 ? 4.0 : 2.0) * std::exp(-t * mu1_shifted(j * h));
    }
    return s * h / 3.0;
  };
  Real prev = simpson(16);
  Real cur = prev;
  bool converged = false;
  for (int panels = 32; panels <= 16384; panels *= 2) {
    cur = simpson(panels);
    if (std::abs(cur - prev) <= 1e-8 * 15.0 * std::abs(cur)) {
      converged = true;
      break;
    }
    prev = cur;
  }
  if (!converged) throw numerical_error("ct_cylinder: frequency quadrature failed to resolve");
  CtResult out;
  out.integral_shifted = 2.0 * cur;  // evenness
  out.alpha1 = alpha1;
  out.log_ct = std::log(kTwoPi) + t * alpha1 - std::log(out.integral_shifted);
  out.ct = out.log_ct > 709.0 ? std::numeric_limits<Real>::infinity() : std::exp(out.log_ct);
  return out;
}

namespace {

// Shared frequency quadrature for the profile experiments: symmetric Simpson
// mesh on [0, W] folded by conjugate evenness. Returns the rescaled field
// c_t u on the sample grid.
struct FoldedSynthesis {
  MatrixXr rescaled;  // x by y
  Real log_ct;
};

FoldedSynthesis rescaled_field(const ModalEvaluator& eval, Real t,
                               std::span<const Real> x_points, std::span<const int> y_idx,
                               int panels) {
  Real w_hi = 1.0;
  int guard = 0;
  while (t * eval.mu1_shifted(w_hi) < kLogCut && guard++ < 80) w_hi *= 2.0;
  const auto nx = static_cast<Eigen::Index>(x_points.size());
  const auto ny = static_cast<Eigen::Index>(y_idx.size());
  const Real h = w_hi / (2 * panels);
  MatrixXc acc = MatrixXc::Zero(nx, ny);
  Real mass = 0.0;
  const Complex i(0.0, 1.0);
  for (int j = 0; j <= 2 * panels; ++j) {
    const Real w = j * h;
    Real weight = (j == 0 || j == 2 * panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    weight *= h / 3.0;
    const auto& p = eval.at(w);
    const Real damp1 = std::exp(-t * (p.mu[0] - eval.alpha1()));
    mass += weight * damp1;
    VectorXc eta = VectorXc::Zero(ny);
    for (int n = 0; n < p.mu.size(); ++n) {
      const Real expo = t * (p.mu[n] - eval.alpha1());
      if (expo > kLogCut * 16.0) continue;
      const Complex an = p.coeffs[n] * std::exp(-expo);
      for (Eigen::Index jy = 0; jy < ny; ++jy) {
        eta[jy] += an * p.spectrum->modes(y_idx[static_cast<std::size_t>(jy)], n);
      }
    }
    // fold +w and -w: A_n(-w) = conj A_n(w), phi even, so the pair contributes
    // 2 Re(eta e^{iwx}); the w = 0 node must not be doubled
    for (Eigen::Index jx = 0; jx < nx; ++jx) {
      const Complex phase = std::exp(i * w * x_points[static_cast<std::size_t>(jx)]);
      if (j == 0) {
        acc.row(jx) += weight * (phase * eta).transpose();
      } else {
        acc.row(jx) += weight * (phase * eta).transpose() +
                       weight * (std::conj(phase) * eta.conjugate()).transpose();
      }
    }
  }
  const Real mass_full = 2.0 * mass;  // evenness of mu_1
  FoldedSynthesis out;
  // c_t u = (2 pi / ∫ e^{-t mu1}) (2 pi)^{-1/2} ∫ eta e^{iwx}; shifts cancel
  out.rescaled = (std::sqrt(kTwoPi) / mass_full) * acc.real();
  out.log_ct = std::log(kTwoPi) + t * eval.alpha1() - std::log(mass_full);
  return out;
}

FoldedSynthesis converged_rescaled_field(const ModalEvaluator& eval, Real t,
                                         std::span<const Real> x_points,
                                         std::span<const int> y_idx) {
  FoldedSynthesis prev = rescaled_field(eval, t, x_points, y_idx, 24);
  Real prev_gap = std::numeric_limits<Real>::infinity();
  for (int panels = 48; panels <= 6144; panels *= 2) {
    FoldedSynthesis cur = rescaled_field(eval, t, x_points, y_idx, panels);
    const Real gap = (cur.rescaled - prev.rescaled).cwiseAbs().maxCoeff();
    const Real scale = std::max(cur.rescaled.cwiseAbs().maxCoeff(), 1e-12);
    // accept at the target, or once refinement stalls on the eigensolver
    // noise floor (the quadrature itself is then converged past it)
    if (gap <= 1e-7 * scale) return cur;
    if (panels >= 96 && gap >= 0.5 * prev_gap) return cur;
    prev = cur;
    prev_gap = gap;
  }
  throw numerical_error("cylinder: frequency quadrature failed to resolve the profile");
}

}  // namespace

CylinderProfileResult asymptotic_profile(const CylinderDatum& datum,
                                         std::span<const Real> schedule,
                                         std::array<Real, 2> x_interval, int x_samples,
                                         std::array<Real, 2> y_window, int n_modes) {
  require_increasing(schedule, "asymptotic_profile");
  ModalEvaluator eval(datum, n_modes);

  CylinderProfileResult out;
  out.y_indices = window_node_indices(datum.mesh(), y_window);
  out.x_points = uniform_points(x_interval, x_samples);

  const auto& base = eval.at(0.0);
  out.projection = std::sqrt(kTwoPi) * base.coeffs[0].real();
  out.e1.resize(static_cast<Eigen::Index>(out.y_indices.size()));
  for (std::size_t j = 0; j < out.y_indices.size(); ++j) {
    out.e1[static_cast<Eigen::Index>(j)] = base.spectrum->modes(out.y_indices[j], 0);
  }

  for (const Real t : schedule) {
    const auto field = converged_rescaled_field(eval, t, out.x_points, out.y_indices);
    ProfileRow row;
    row.t = t;
    row.log_ct = field.log_ct;
    Real sup = 0.0;
    Real flat = 0.0;
    for (Eigen::Index jy = 0; jy < out.e1.size(); ++jy) {
      const Real target = out.projection * out.e1[jy];
      Real cmin = std::numeric_limits<Real>::infinity();
      Real cmax = -cmin;
      for (Eigen::Index jx = 0; jx < field.rescaled.rows(); ++jx) {
        const Real v = field.rescaled(jx, jy);
        sup = std::max(sup, std::abs(v - target));
        cmin = std::min(cmin, v);
        cmax = std::max(cmax, v);
      }
      flat = std::max(flat, cmax - cmin);
    }
    row.sup_deviation = sup;
    row.x_flatness = flat;
    out.rows.push_back(row);
    if (t == schedule.back()) out.final_rescaled = field.rescaled;
  }
  return out;
}

SignPatternResult sign_pattern(const CylinderDatum& datum, std::span<const Real> schedule,
                               std::array<Real, 2> x_interval, int x_samples,
                               std::array<Real, 2> y_window, int n_modes,
                               const std::function<Real(Real)>* reference) {
  require_increasing(schedule, "sign_pattern");
  ModalEvaluator eval(datum, n_modes);

  SignPatternResult out;
  const auto y_idx = window_node_indices(datum.mesh(), y_window);
  const auto x_pts = uniform_points(x_interval, x_samples);
  const auto& base = eval.at(0.0);
  out.projection = std::sqrt(kTwoPi) * base.coeffs[0].real();
  if (!(out.projection > 0.0)) {
    throw validation_error("sign_pattern: datum projection onto the principal mode must be positive");
  }

  VectorXr ref(static_cast<Eigen::Index>(y_idx.size()));
  for (std::size_t j = 0; j < y_idx.size(); ++j) {
    const Real y = static_cast<Real>(y_idx[j] + 1) / datum.mesh();
    ref[static_cast<Eigen::Index>(j)] =
        reference ? (*reference)(y) : base.spectrum->modes(y_idx[j], 0);
  }
  if (ref.cwiseAbs().minCoeff() <= 1e-8) {
    throw validation_error("sign_pattern: window touches the reference zero set");
  }

  out.schedule.assign(schedule.begin(), schedule.end());
  out.reference_map.resize(1, ref.size());
  for (Eigen::Index j = 0; j < ref.size(); ++j) out.reference_map(0, j) = ref[j] > 0.0 ? 1 : -1;

  std::vector<MatrixXr> fields;
  for (const Real t : schedule) {
    fields.push_back(converged_rescaled_field(eval, t, x_pts, y_idx).rescaled);
  }
  for (std::size_t it = 0; it < fields.size(); ++it) {
    Real min_agree = std::numeric_limits<Real>::infinity();
    for (Eigen::Index jx = 0; jx < fields[it].rows(); ++jx) {
      for (Eigen::Index jy = 0; jy < fields[it].cols(); ++jy) {
        const Real agree = fields[it](jx, jy) * (out.reference_map(0, jy) > 0 ? 1.0 : -1.0);
        min_agree = std::min(min_agree, agree);
      }
    }
    out.min_agreement.push_back(min_agree);
    out.all_match.push_back(min_agree > 0.0 ? 1 : 0);
  }
  std::size_t first_ok = fields.size();
  for (std::size_t it = fields.size(); it-- > 0;) {
    if (out.all_match[it]) {
      first_ok = it;
    } else {
      break;
    }
  }
  if (first_ok < fields.size()) out.time_to_match = out.schedule[first_ok];
  const auto& last = fields.back();
  out.final_map.resize(last.rows(), last.cols());
  for (Eigen::Index jx = 0; jx < last.rows(); ++jx) {
    for (Eigen::Index jy = 0; jy < last.cols(); ++jy) {
      out.final_map(jx, jy) = last(jx, jy) > 0.0 ? 1 : (last(jx, jy) < 0.0 ? -1 : 0);
    }
  }
  return out;
}

RemainderReport remainder_diagnostic(int mesh, int n_disc, int k, int l,
                                     std::span<const Real> schedule) {
  require_increasing(schedule, "remainder_diagnostic");
  if (k < 1 || l < 1 || !(l - k > 0.25)) {
    throw validation_error("remainder_diagnostic: need integers k, l with l - k > 1/4");
  }
  if (n_disc < 2 || n_disc > mesh - 1) {
    throw validation_error("remainder_diagnostic: bad discrete mode count");
  }
  const int n_big = 400;
  const auto beam = beam_wavenumbers(n_big);
  const Real alpha1 = beam[0].alpha;

  RemainderReport rep;
  rep.spectral_gap = beam[1].alpha - alpha1;

  // coefficient series sum_{n>=2} (2 + alpha_n^k) / alpha_n^l
  Real acc = 0.0;
  rep.coeff_n_for_1e10 = 0;
  for (int n = 2; n <= 220; ++n) {
    const Real an = beam[static_cast<std::size_t>(n - 1)].alpha;
    const Real term = (2.0 + std::pow(an, k)) / std::pow(an, l);
    acc += term;
    rep.coeff_partial_sums.push_back(acc);
    if (rep.coeff_n_for_1e10 == 0 && term < 1e-10) rep.coeff_n_for_1e10 = n;
  }
  {
    // tail: alpha_n >= ((4 ceil(n/2) - 1) pi / 2)^4, factor 2 per bracket
    Real tail = 0.0;
    for (int m = 111; m < 200000; ++m) {
      const Real kn = (4.0 * m - 1.0) * kPi / 2.0;
      const Real an = std::pow(kn, 4.0);
      const Real term = 2.0 * (2.0 + std::pow(an, k)) / std::pow(an, l);
      tail += term;
      if (term < 1e-18 * std::max(tail, 1e-300)) break;
    }
    rep.coeff_tail_bound = tail;
  }

  // discrete curves for the first few modes
  const int probe_modes = std::min(n_disc, mesh - 1);
  auto mu_shifted = [&](Real w, int n) {
    return cached_spectrum(w, mesh, probe_modes)->mu[n] - cached_spectrum(0.0, mesh, 1)->mu[0];
  };

  std::vector<Real> ts, log10s;
  for (const Real t : schedule) {
    std::vector<Real> log_terms;
    // n = 2 .. n_disc: quadrature of [1 + alpha_n^k + w^{4k}] e^{-t mu~_n}
    for (int n = 2; n <= probe_modes; ++n) {
      const Real an = beam[static_cast<std::size_t>(n - 1)].alpha;
      const Real gap_n = mu_shifted(0.0, n - 1);
      Real w_hi = 1.0;
      int guard = 0;
      while (t * (mu_shifted(w_hi, n - 1) - gap_n) < kLogCut && guard++ < 60) w_hi *= 2.0;
      const int panels = 96;
      const Real h = w_hi / (2 * panels);
      Real s = 0.0;
      for (int j = 0; j <= 2 * panels; ++j) {
        const Real w = j * h;
        const Real weight = (j == 0 || j == 2 * panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        s += weight * (1.0 + std::pow(an, k) + std::pow(w, 4 * k)) *
             std::exp(-t * (mu_shifted(w, n - 1) - gap_n));
      }
      s *= 2.0 * h / 3.0;  // evenness
      log_terms.push_back(-t * gap_n + std::log(s));
    }
    // analytic envelope for n > n_disc from mu_n >= alpha_n + w^4
    for (int n = probe_modes + 1; n <= n_big; ++n) {
      const Real an = beam[static_cast<std::size_t>(n - 1)].alpha;
      const Real gap_n = an - alpha1;
      if (t * gap_n - std::log(1.0 + std::pow(an, k)) > 2500.0) break;
      const Real body = (1.0 + std::pow(an, k)) * 0.5 * std::tgamma(0.25) * std::pow(t, -0.25) +
                        0.5 * std::tgamma(k + 0.25) * std::pow(t, -(k + 0.25));
      log_terms.push_back(-t * gap_n + std::log(body));
    }
    const Real log_sum = log_sum_exp(log_terms);

    // denominator ∫ e^{-t mu~_1}
    const auto ct = ct_cylinder([&](Real w) { return mu_shifted(w, 0); },
                                cached_spectrum(0.0, mesh, 1)->mu[0], t);
    const Real log_value = log_sum - std::log(ct.integral_shifted);

    RemainderRow row;
    row.t = t;
    row.log10_value = log_value / std::log(10.0);
    // envelope-series increment at n = 50 (within the analytic tail here)
    {
      const Real an = beam[49].alpha;
      const Real body = (1.0 + std::pow(an, k)) * 0.5 * std::tgamma(0.25) * std::pow(t, -0.25) +
                        0.5 * std::tgamma(k + 0.25) * std::pow(t, -(k + 0.25));
      row.cauchy_increment_log10 =
          (-t * (an - alpha1) + std::log(body) - std::log(ct.integral_shifted)) / std::log(10.0);
    }
    rep.rows.push_back(row);
    ts.push_back(t);
    log10s.push_back(row.log10_value);
  }
  rep.fitted_order = fit_loglog_slope_from_log10(ts, log10s, 0.5);
  return rep;
}

}  // namespace polyheat
