#pragma once

#include <stdexcept>
#include <string>

namespace vhts {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when a quadrature or series cannot reach its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace vhts
