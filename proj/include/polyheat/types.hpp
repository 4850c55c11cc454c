#pragma once

#include <Eigen/Core>
#include <complex>

namespace polyheat {

using Real = double;
using Complex = std::complex<Real>;

using ArrayXr = Eigen::ArrayXd;
using ArrayXc = Eigen::ArrayXcd;
using VectorXr = Eigen::VectorXd;
using VectorXc = Eigen::VectorXcd;
using MatrixXr = Eigen::MatrixXd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

}  // namespace polyheat
