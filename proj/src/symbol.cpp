#include "polyheat/symbol.hpp"

#include <cmath>

#include "polyheat/errors.hpp"

namespace polyheat {

SymbolSpec SymbolSpec::fractional_power(Real alpha) {
  if (!(alpha > 0.0)) throw validation_error("SymbolSpec: alpha must be positive");
  SymbolSpec s;
  s.fractional_ = true;
  s.alpha_ = alpha;
  return s;
}

SymbolSpec SymbolSpec::polynomial(int dim, std::vector<Monomial> terms) {
  if (dim != 1 && dim != 2) throw validation_error("SymbolSpec: dim must be 1 or 2");
  if (terms.empty()) throw validation_error("SymbolSpec: polynomial needs at least one term");
  int degree = -1;
  bool nonzero = false;
  for (const auto& t : terms) {
    const int d = t.exponents[0] + (dim == 2 ? t.exponents[1] : 0);
    if (t.exponents[0] < 0 || t.exponents[1] < 0 || (dim == 1 && t.exponents[1] != 0)) {
      throw validation_error("SymbolSpec: bad monomial exponents");
    }
    if (degree == -1) degree = d;
    if (d != degree) throw validation_error("SymbolSpec: polynomial must be homogeneous");
    if (t.coefficient != 0.0) nonzero = true;
  }
  if (degree < 2 || degree % 2 != 0) {
    throw validation_error("SymbolSpec: polynomial degree must be even and >= 2");
  }
  if (!nonzero) throw validation_error("SymbolSpec: polynomial is identically zero");

  SymbolSpec s;
  s.fractional_ = false;
  s.degree_ = degree;
  s.dim_ = dim;
  s.terms_ = std::move(terms);

  // Positivity away from the origin, sampled on the unit sphere.
  const int samples = dim == 1 ? 2 : 720;
  for (int i = 0; i < samples; ++i) {
    Real w0, w1 = 0.0;
    if (dim == 1) {
      w0 = i == 0 ? 1.0 : -1.0;
    } else {
      const Real th = kTwoPi * i / samples;
      w0 = std::cos(th);
      w1 = std::sin(th);
    }
    if (!(s.value(w0, w1) > 0.0)) {
      throw validation_error("SymbolSpec: polynomial is not positive away from the origin");
    }
  }
  return s;
}

Real SymbolSpec::value(Real w0, Real w1) const {
  if (fractional_) {
    const Real r2 = w0 * w0 + w1 * w1;
    return std::pow(r2, alpha_);  // |w|^(2 alpha)
  }
  Real acc = 0.0;
  for (const auto& t : terms_) {
    Real term = t.coefficient;
    for (int k = 0; k < t.exponents[0]; ++k) term *= w0;
    for (int k = 0; k < t.exponents[1]; ++k) term *= w1;
    acc += term;
  }
  return acc;
}

ArrayXr evaluate_symbol(const SymbolSpec& spec, const Grid& grid) {
  if (!spec.is_fractional() && spec.dim() != grid.dim()) {
    throw validation_error("evaluate_symbol: symbol and grid dimensions differ");
  }
  ArrayXr out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto w = grid.omega_at(i);
    out[static_cast<Eigen::Index>(i)] = spec.value(w[0], w[1]);
  }
  if ((out < 0.0).any()) {
    throw numerical_error("evaluate_symbol: negative sampled symbol value (non-dissipative)");
  }
  return out;
}

}  // namespace polyheat
