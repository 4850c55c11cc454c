#pragma once

#include <array>
#include <cstddef>

#include "polyheat/errors.hpp"
#include "polyheat/types.hpp"

namespace polyheat {

/// Uniform periodic grid on [-R, R)^N, N in {1, 2}, with M points per axis.
/// Physical nodes x_j = -R + j h, h = 2R/M. The matching frequency grid is
/// omega_j = pi j / R for j = -M/2 .. M/2-1, stored in ascending order.
class Grid {
 public:
  Grid(int dim, Real extent, int points_per_axis)
      : dim_(dim), extent_(extent), m_(points_per_axis) {
    if (dim != 1 && dim != 2) throw validation_error("Grid: dim must be 1 or 2");
    if (!(extent > 0.0)) throw validation_error("Grid: extent must be positive");
    if (m_ < 8 || m_ % 2 != 0) throw validation_error("Grid: points_per_axis must be even and >= 8");
  }

  int dim() const { return dim_; }
  Real extent() const { return extent_; }
  int points_per_axis() const { return m_; }
  std::size_t size() const {
    auto m = static_cast<std::size_t>(m_);
    return dim_ == 1 ? m : m * m;
  }

  Real spacing() const { return 2.0 * extent_ / m_; }
  Real freq_spacing() const { return kPi / extent_; }

  Real x(int j) const { return -extent_ + spacing() * j; }
  /// Frequency at ascending-order index i in [0, M): omega = pi (i - M/2) / R.
  Real omega(int i) const { return freq_spacing() * (i - m_ / 2); }

  std::size_t flat(int i0, int i1 = 0) const {
    return static_cast<std::size_t>(i0) * (dim_ == 2 ? m_ : 1) + static_cast<std::size_t>(i1);
  }

  ArrayXr x_axis() const {
    ArrayXr xs(m_);
    for (int j = 0; j < m_; ++j) xs[j] = x(j);
    return xs;
  }
  ArrayXr omega_axis() const {
    ArrayXr ws(m_);
    for (int i = 0; i < m_; ++i) ws[i] = omega(i);
    return ws;
  }

  /// Frequency components for a flattened index, ascending order per axis.
  std::array<Real, 2> omega_at(std::size_t flat_index) const {
    if (dim_ == 1) return {omega(static_cast<int>(flat_index)), 0.0};
    const int i0 = static_cast<int>(flat_index / static_cast<std::size_t>(m_));
    const int i1 = static_cast<int>(flat_index % static_cast<std::size_t>(m_));
    return {omega(i0), omega(i1)};
  }

  std::array<Real, 2> x_at(std::size_t flat_index) const {
    if (dim_ == 1) return {x(static_cast<int>(flat_index)), 0.0};
    const int i0 = static_cast<int>(flat_index / static_cast<std::size_t>(m_));
    const int i1 = static_cast<int>(flat_index % static_cast<std::size_t>(m_));
    return {x(i0), x(i1)};
  }

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && extent_ == o.extent_ && m_ == o.m_;
  }

 private:
  int dim_;
  Real extent_;
  int m_;
};

}  // namespace polyheat
