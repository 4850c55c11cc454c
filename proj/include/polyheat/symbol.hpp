#pragma once

#include <array>
#include <vector>

#include "polyheat/grid.hpp"
#include "polyheat/types.hpp"

namespace polyheat {

/// Fourier symbol of the evolution generator: either a fractional power
/// |omega|^(2 alpha) or an even-order homogeneous polynomial with
/// nonnegative values, P(omega) > 0 away from the origin.
class SymbolSpec {
 public:
  struct Monomial {
    std::array<int, 2> exponents;  // second entry unused in one dimension
    Real coefficient;
  };

  static SymbolSpec fractional_power(Real alpha);
  static SymbolSpec polynomial(int dim, std::vector<Monomial> terms);

  bool is_fractional() const { return fractional_; }
  Real alpha() const { return alpha_; }
  int degree() const { return degree_; }  // 2m for polynomials, meaningless for fractional
  int dim() const { return dim_; }        // 0 for fractional (any dimension)
  const std::vector<Monomial>& terms() const { return terms_; }

  /// Homogeneity order s: symbol(c w) = c^s symbol(w). 2*alpha or the degree.
  Real homogeneity() const { return fractional_ ? 2.0 * alpha_ : static_cast<Real>(degree_); }

  Real value(Real w0, Real w1 = 0.0) const;

 private:
  SymbolSpec() = default;
  bool fractional_ = true;
  Real alpha_ = 1.0;
  int degree_ = 0;
  int dim_ = 0;
  std::vector<Monomial> terms_;
};

/// Symbol sampled over the grid's frequency points (ascending order, flattened).
/// Rejects symbols with a negative sampled value.
ArrayXr evaluate_symbol(const SymbolSpec& spec, const Grid& grid);

}  // namespace polyheat
