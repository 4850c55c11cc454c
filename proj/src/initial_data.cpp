#include "polyheat/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyheat/errors.hpp"

namespace polyheat {

InitialDatum InitialDatum::gaussian(int dim, std::array<Real, 2> center, Real width,
                                    Real amplitude) {
  return signed_mix(dim, {GaussianTerm{center, width, amplitude}});
}

InitialDatum InitialDatum::gaussian_with_mass(int dim, std::array<Real, 2> center, Real width,
                                              Real mass) {
  if (!(width > 0.0)) throw validation_error("InitialDatum: width must be positive");
  const Real amp = mass / std::pow(kTwoPi * width * width, dim / 2.0);
  return gaussian(dim, center, width, amp);
}

InitialDatum InitialDatum::bump_indicator(int dim, std::array<Real, 2> center, Real radius,
                                          Real amplitude) {
  if (dim != 1 && dim != 2) throw validation_error("InitialDatum: dim must be 1 or 2");
  if (!(radius > 0.0)) throw validation_error("InitialDatum: radius must be positive");
  InitialDatum d;
  d.kind_ = Kind::Bump;
  d.dim_ = dim;
  d.bump_center_ = center;
  d.bump_radius_ = radius;
  d.bump_amplitude_ = amplitude;
  return d;
}

InitialDatum InitialDatum::signed_mix(int dim, std::vector<GaussianTerm> terms) {
  if (dim != 1 && dim != 2) throw validation_error("InitialDatum: dim must be 1 or 2");
  if (terms.empty()) throw validation_error("InitialDatum: signed mix needs at least one term");
  for (const auto& t : terms) {
    if (!(t.width > 0.0)) throw validation_error("InitialDatum: width must be positive");
  }
  InitialDatum d;
  d.kind_ = terms.size() == 1 ? Kind::Gaussian : Kind::SignedMix;
  d.dim_ = dim;
  d.terms_ = std::move(terms);
  return d;
}

InitialDatum InitialDatum::samples(std::vector<Real> xs, std::vector<Real> ys,
                                   std::vector<Real> values) {
  if (xs.size() < 2) throw validation_error("InitialDatum: need at least two sample abscissae");
  if (!std::is_sorted(xs.begin(), xs.end())) {
    throw validation_error("InitialDatum: sample abscissae must be ascending");
  }
  const bool two_d = !ys.empty();
  if (two_d && !std::is_sorted(ys.begin(), ys.end())) {
    throw validation_error("InitialDatum: sample ordinates must be ascending");
  }
  const std::size_t expected = two_d ? xs.size() * ys.size() : xs.size();
  if (values.size() != expected) {
    throw validation_error("InitialDatum: sample value count does not match the grid");
  }
  for (Real v : values) {
    if (!std::isfinite(v)) throw validation_error("InitialDatum: samples must be finite");
  }
  InitialDatum d;
  d.kind_ = Kind::Samples;
  d.dim_ = two_d ? 2 : 1;
  d.sample_xs_ = std::move(xs);
  d.sample_ys_ = std::move(ys);
  d.sample_values_ = std::move(values);
  return d;
}

namespace {

Real interp1(const std::vector<Real>& xs, const std::vector<Real>& vs, Real x) {
  if (x < xs.front() || x > xs.back()) return 0.0;
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return vs.front();
  if (it == xs.end()) return vs.back();
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const Real w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return (1.0 - w) * vs[lo] + w * vs[hi];
}

}  // namespace

Real InitialDatum::value(Real x0, Real x1) const {
  switch (kind_) {
    case Kind::Gaussian:
    case Kind::SignedMix: {
      Real acc = 0.0;
      for (const auto& t : terms_) {
        const Real dx0 = x0 - t.center[0];
        const Real dx1 = dim_ == 2 ? x1 - t.center[1] : 0.0;
        acc += t.amplitude * std::exp(-(dx0 * dx0 + dx1 * dx1) / (2.0 * t.width * t.width));
      }
      return acc;
    }
    case Kind::Bump: {
      const Real dx0 = x0 - bump_center_[0];
      const Real dx1 = dim_ == 2 ? x1 - bump_center_[1] : 0.0;
      return dx0 * dx0 + dx1 * dx1 < bump_radius_ * bump_radius_ ? bump_amplitude_ : 0.0;
    }
    case Kind::Samples: {
      if (dim_ == 1) return interp1(sample_xs_, sample_values_, x0);
      if (x0 < sample_xs_.front() || x0 > sample_xs_.back() || x1 < sample_ys_.front() ||
          x1 > sample_ys_.back()) {
        return 0.0;
      }
      // bilinear on the rectilinear sample grid
      const auto ix = std::min(sample_xs_.size() - 2,
                               static_cast<std::size_t>(std::upper_bound(sample_xs_.begin(),
                                                                         sample_xs_.end(), x0) -
                                                        sample_xs_.begin() - 1));
      const auto iy = std::min(sample_ys_.size() - 2,
                               static_cast<std::size_t>(std::upper_bound(sample_ys_.begin(),
                                                                         sample_ys_.end(), x1) -
                                                        sample_ys_.begin() - 1));
      const Real wx = (x0 - sample_xs_[ix]) / (sample_xs_[ix + 1] - sample_xs_[ix]);
      const Real wy = (x1 - sample_ys_[iy]) / (sample_ys_[iy + 1] - sample_ys_[iy]);
      auto at = [&](std::size_t i, std::size_t j) {
        return sample_values_[i * sample_ys_.size() + j];
      };
      return (1 - wx) * (1 - wy) * at(ix, iy) + wx * (1 - wy) * at(ix + 1, iy) +
             (1 - wx) * wy * at(ix, iy + 1) + wx * wy * at(ix + 1, iy + 1);
    }
  }
  return 0.0;
}

ArrayXr InitialDatum::sample(const Grid& grid) const {
  if (grid.dim() != dim_) throw validation_error("InitialDatum: grid dimension mismatch");
  ArrayXr out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.x_at(i);
    out[static_cast<Eigen::Index>(i)] = value(x[0], x[1]);
  }
  if (!out.isFinite().all()) throw numerical_error("InitialDatum: non-finite sampled value");
  return out;
}

Real InitialDatum::riemann_mass(const Grid& grid) const {
  return sample(grid).sum() * std::pow(grid.spacing(), grid.dim());
}

std::optional<Real> InitialDatum::closed_mass() const {
  switch (kind_) {
    case Kind::Gaussian:
    case Kind::SignedMix: {
      Real acc = 0.0;
      for (const auto& t : terms_) {
        acc += t.amplitude * std::pow(kTwoPi * t.width * t.width, dim_ / 2.0);
      }
      return acc;
    }
    case Kind::Bump:
      return dim_ == 1 ? bump_amplitude_ * 2.0 * bump_radius_
                       : bump_amplitude_ * kPi * bump_radius_ * bump_radius_;
    case Kind::Samples:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Complex> InitialDatum::fourier_at(Real omega) const {
  if (dim_ != 1) return std::nullopt;
  const Complex i(0.0, 1.0);
  switch (kind_) {
    case Kind::Gaussian:
    case Kind::SignedMix: {
      Complex acc(0.0, 0.0);
      for (const auto& t : terms_) {
        acc += t.amplitude * t.width * std::exp(-0.5 * t.width * t.width * omega * omega) *
               std::exp(-i * omega * t.center[0]);
      }
      return acc;
    }
    case Kind::Bump: {
      const Real r = bump_radius_;
      const Real sinc = omega == 0.0 ? r : std::sin(omega * r) / omega;
      return bump_amplitude_ * std::sqrt(2.0 / kPi) * sinc * std::exp(-i * omega * bump_center_[0]);
    }
    case Kind::Samples:
      return std::nullopt;
  }
  return std::nullopt;
}

Real InitialDatum::feature_scale() const {
  switch (kind_) {
    case Kind::Gaussian:
    case Kind::SignedMix: {
      Real w = terms_.front().width;
      for (const auto& t : terms_) w = std::min(w, t.width);
      return w;
    }
    case Kind::Bump:
      return bump_radius_;
    case Kind::Samples: {
      Real dx = sample_xs_[1] - sample_xs_[0];
      for (std::size_t j = 1; j + 1 < sample_xs_.size(); ++j) {
        dx = std::min(dx, sample_xs_[j + 1] - sample_xs_[j]);
      }
      return dx;
    }
  }
  return 1.0;
}

Real InitialDatum::support_extent() const {
  switch (kind_) {
    case Kind::Gaussian:
    case Kind::SignedMix: {
      Real r = 0.0;
      for (const auto& t : terms_) {
        const Real c = std::max(std::abs(t.center[0]), std::abs(t.center[1]));
        r = std::max(r, c + 8.0 * t.width);
      }
      return r;
    }
    case Kind::Bump:
      return std::max(std::abs(bump_center_[0]), std::abs(bump_center_[1])) + bump_radius_;
    case Kind::Samples: {
      Real r = std::max(std::abs(sample_xs_.front()), std::abs(sample_xs_.back()));
      if (!sample_ys_.empty()) {
        r = std::max({r, std::abs(sample_ys_.front()), std::abs(sample_ys_.back())});
      }
      return r;
    }
  }
  return 1.0;
}

std::string InitialDatum::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Gaussian:
      os << "gaussian(center=" << terms_[0].center[0] << ", width=" << terms_[0].width
         << ", amplitude=" << terms_[0].amplitude << ")";
      break;
    case Kind::SignedMix:
      os << "signed_mix(" << terms_.size() << " gaussians)";
      break;
    case Kind::Bump:
      os << "bump_indicator(center=" << bump_center_[0] << ", radius=" << bump_radius_
         << ", amplitude=" << bump_amplitude_ << ")";
      break;
    case Kind::Samples:
      os << "samples(" << sample_values_.size() << " values)";
      break;
  }
  return os.str();
}

}  // namespace polyheat
