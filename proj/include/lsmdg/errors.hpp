// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace lsmdg {

/// Invalid arguments or configuration (bad degree, unsupported model, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state outside the physically admissible set (e.g. negative pressure).
class AdmissibilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The geometry mapping is not orientation preserving somewhere.
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The regularized normal equations are not positive definite.
class LinearSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reference solution could not be constructed.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lsmdg
