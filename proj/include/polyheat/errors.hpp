#pragma once

#include <stdexcept>
#include <string>

namespace polyheat {

/// Invalid user input: bad parameter, violated precondition. CLI maps this to exit code 2.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical breakdown: quadrature divergence, unresolved kernel, solver failure.
/// CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polyheat
