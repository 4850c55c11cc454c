#pragma once

#include <utility>
#include <vector>

#include "polyheat/types.hpp"

namespace polyheat {

/// Clamped-beam eigenpair on (0,1): the n-th positive root k_n of
/// cos(k) cosh(k) = 1 and the eigenvalue alpha_n = k_n^4 of the fourth
/// derivative with clamped ends.
struct BeamMode {
  int index = 0;         // 1-based
  Real k = 0.0;          // wavenumber
  Real alpha = 0.0;      // k^4
  Real sigma = 0.0;      // shape coefficient (cosh k - cos k)/(sinh k - sin k)
  Real norm = 1.0;       // L2 norm of the raw shape, divides the eigenfunction
};

/// Secant-positive bracket J_m = ((4m-1) pi/2, (4m+1) pi/2). Each J_m contains
/// exactly two wavenumbers, k_{2m-1} just above the left endpoint and k_{2m}
/// just below the right one, so k_n lies in J_{ceil(n/2)}.
std::pair<Real, Real> beam_bracket(int m);

/// First n_max wavenumbers in ascending order. Roots are located by bisection
/// of the overflow-safe form cos(k) - sech(k) inside each bracket and refined
/// to machine accuracy.
std::vector<BeamMode> beam_wavenumbers(int n_max);

/// L2-normalized eigenfunction value at y in [0,1]. Evaluated with decaying
/// exponentials only; the textbook cosh/sinh form loses all accuracy for
/// k beyond ~35.
Real beam_eigenfunction(const BeamMode& mode, Real y);

}  // namespace polyheat
