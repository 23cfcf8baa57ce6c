#pragma once

#include <stdexcept>
#include <string>

namespace giv {

/// Invalid input: out-of-range parameters, malformed configuration files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested combination (psf, estimator, phantom) violates a precondition
/// of the method, e.g. a mean-curvature estimator with a non-compact psf.
class IncompatibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root finding or quadrature could not reach its tolerance, or a quantity
/// that must be nonzero vanished.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace giv
