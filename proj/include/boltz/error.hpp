#pragma once

#include <stdexcept>
#include <string>

namespace boltz {

// Bad or inconsistent run configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// NaN/overflow, quadrature non-convergence, stability violations. Exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace boltz
