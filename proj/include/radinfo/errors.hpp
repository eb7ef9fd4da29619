#pragma once

#include <stdexcept>
#include <string>

namespace radinfo {

// Invalid configuration or parameters supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a special function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iterative numerics failed (non-convergence, lost normalization, NaN).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scattering autocorrelation produced a matrix that is not positive
// semidefinite.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Doppler bound requested for a single pulse.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace radinfo
