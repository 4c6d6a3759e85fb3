#pragma once

#include <stdexcept>

namespace jcq {

// Malformed or inconsistent user configuration. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical routine could not deliver a result within its stated tolerances.
// CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace jcq
