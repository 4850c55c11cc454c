#include "polyheat/fullspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyheat/errors.hpp"
#include "polyheat/numerics.hpp"
#include "polyheat/parallel.hpp"

namespace polyheat {

std::vector<std::size_t> window_indices(const CompactWindow& window, const Grid& grid) {
  if (window.dim != grid.dim()) throw validation_error("CompactWindow: dimension mismatch");
  if (window.stride < 1) throw validation_error("CompactWindow: stride must be >= 1");
  for (int d = 0; d < window.dim; ++d) {
    if (!(window.lo[static_cast<std::size_t>(d)] < window.hi[static_cast<std::size_t>(d)])) {
      throw validation_error("CompactWindow: empty interval");
    }
    if (window.lo[static_cast<std::size_t>(d)] <= -grid.extent() ||
        window.hi[static_cast<std::size_t>(d)] >= grid.extent()) {
      throw validation_error("CompactWindow: window must lie strictly inside the box");
    }
  }
  std::vector<std::size_t> idx;
  const int m = grid.points_per_axis();
  auto inside = [&](Real v, int d) {
    return v >= window.lo[static_cast<std::size_t>(d)] &&
           v <= window.hi[static_cast<std::size_t>(d)];
  };
  if (grid.dim() == 1) {
    for (int j = 0; j < m; j += window.stride) {
      if (inside(grid.x(j), 0)) idx.push_back(static_cast<std::size_t>(j));
    }
  } else {
    for (int j0 = 0; j0 < m; j0 += window.stride) {
      if (!inside(grid.x(j0), 0)) continue;
      for (int j1 = 0; j1 < m; j1 += window.stride) {
        if (inside(grid.x(j1), 1)) idx.push_back(grid.flat(j0, j1));
      }
    }
  }
  if (idx.empty()) throw validation_error("CompactWindow: no grid point falls inside");
  return idx;
}

Real normalization_mass(const SymbolSpec& spec, int dim) {
  if (dim != 1 && dim != 2) throw validation_error("normalization_mass: dim must be 1 or 2");
  if (!spec.is_fractional() && spec.dim() != dim) {
    throw validation_error("normalization_mass: symbol dimension mismatch");
  }
  const QuadratureOptions opt{1e-13, 1e-12, 48};
  if (spec.is_fractional()) {
    const Real two_alpha = 2.0 * spec.alpha();
    if (dim == 1) {
      return 2.0 * integrate_half_line([&](Real r) { return std::exp(-std::pow(r, two_alpha)); },
                                       opt);
    }
    return kTwoPi * integrate_half_line(
                        [&](Real r) { return r * std::exp(-std::pow(r, two_alpha)); }, opt);
  }
  if (dim == 1) {
    return integrate_real_line([&](Real w) { return std::exp(-spec.value(w)); }, opt);
  }
  // iterated quadrature; the inner truncation throws if the symbol fails to
  // grow along some line (divergent mass)
  return integrate_real_line(
      [&](Real w0) {
        return integrate_real_line([&](Real w1) { return std::exp(-spec.value(w0, w1)); }, opt);
      },
      QuadratureOptions{1e-11, 1e-10, 40});
}

Real rescale_factor(const SymbolSpec& spec, int dim, Real t) {
  if (!(t > 0.0)) throw validation_error("rescale_factor: t must be positive");
  const Real mass = normalization_mass(spec, dim);
  return std::pow(kTwoPi, dim) * std::pow(t, dim / spec.homogeneity()) / mass;
}

int kernel_halfwidth_samples(const SymbolSpec& spec, const Grid& grid, Real t) {
  if (!(t > 0.0)) throw validation_error("kernel_halfwidth_samples: t must be positive");
  const Real axis_value = spec.value(1.0, 0.0);  // symbol at the unit frequency on axis 0
  const Real w_half = std::pow(std::log(2.0) / (t * axis_value), 1.0 / spec.homogeneity());
  return static_cast<int>(std::floor(2.0 * w_half / grid.freq_spacing())) + 1;
}

namespace {

Real checked_riemann_mass(const InitialDatum& u0, const ArrayXr& samples, const Grid& grid) {
  const Real mass = samples.sum() * std::pow(grid.spacing(), grid.dim());
  if (const auto closed = u0.closed_mass(); closed && u0.is_smooth()) {
    // smooth families: the Riemann sum is spectrally accurate, so a gap means
    // the grid does not actually resolve or contain the datum
    if (std::abs(*closed - mass) > 1e-8 * std::max(1.0, std::abs(*closed))) {
      throw numerical_error("rescaled_profile: grid does not resolve the datum mass");
    }
  }
  return mass;
}

}  // namespace

ProfileResult rescaled_profile(const InitialDatum& u0, const SymbolSpec& spec, Real t,
                               const CompactWindow& window, const Grid& grid) {
  const auto idx = window_indices(window, grid);
  const ArrayXr samples = u0.sample(grid);
  const Real mass = checked_riemann_mass(u0, samples, grid);

  const auto field = SpectralField::from_real_values(grid, samples);
  const auto evolved = propagate(field, spec, t);
  const Real ct = rescale_factor(spec, grid.dim(), t);

  ProfileResult out;
  out.t = t;
  out.ct = ct;
  out.mass = mass;
  out.under_resolved = kernel_halfwidth_samples(spec, grid, t) < 8;
  out.points.reserve(idx.size());
  out.rescaled.resize(static_cast<Eigen::Index>(idx.size()));
  Real sup = 0.0;
  Real min_u = std::numeric_limits<Real>::infinity();
  const ArrayXr values = evolved.real_values();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto p = grid.x_at(idx[i]);
    const Real v = values[static_cast<Eigen::Index>(idx[i])];
    out.points.push_back(p);
    out.rescaled[static_cast<Eigen::Index>(i)] = ct * v;
    sup = std::max(sup, std::abs(ct * v - mass));
    min_u = std::min(min_u, v);
  }
  out.sup_deviation = sup;
  out.min_on_window = min_u;
  return out;
}

PositivityResult time_to_positivity(const InitialDatum& u0, const SymbolSpec& spec,
                                    const CompactWindow& window, std::span<const Real> schedule,
                                    const std::function<Grid(Real)>& grid_for_t) {
  if (schedule.empty()) throw validation_error("time_to_positivity: empty schedule");
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
    if (!(schedule[i] < schedule[i + 1])) {
      throw validation_error("time_to_positivity: schedule must be strictly increasing");
    }
  }
  {
    const Grid g0 = grid_for_t(schedule.front());
    const ArrayXr samples = u0.sample(g0);
    const Real hn = std::pow(g0.spacing(), g0.dim());
    const Real mass = samples.sum() * hn;
    const Real scale = samples.abs().sum() * hn;
    // positive beyond rounding, relative to the total variation of the datum
    if (!(mass > 1e-12 * scale)) {
      throw validation_error("time_to_positivity: datum mass must be positive");
    }
  }

  PositivityResult out;
  out.schedule.assign(schedule.begin(), schedule.end());
  out.min_values.assign(schedule.size(), 0.0);
  parallel_for(schedule.size(), [&](std::size_t i) {
    const Grid grid = grid_for_t(schedule[i]);
    const auto idx = window_indices(window, grid);
    const auto field = SpectralField::from_real_values(grid, u0.sample(grid));
    const ArrayXr values = propagate(field, spec, schedule[i]).real_values();
    Real min_u = std::numeric_limits<Real>::infinity();
    for (const auto j : idx) min_u = std::min(min_u, values[static_cast<Eigen::Index>(j)]);
    out.min_values[i] = min_u;
  });

  std::size_t first_ok = schedule.size();
  for (std::size_t i = schedule.size(); i-- > 0;) {
    if (out.min_values[i] > 0.0) {
      first_ok = i;
    } else {
      break;
    }
  }
  if (first_ok < schedule.size()) out.time_to_positivity = out.schedule[first_ok];
  for (std::size_t i = 0; i < first_ok; ++i) {
    if (out.min_values[i] < 0.0) out.negative_before = true;
  }
  return out;
}

}  // namespace polyheat
