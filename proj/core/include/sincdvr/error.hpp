#pragma once

#include <stdexcept>
#include <string>

namespace sincdvr {

/// Invalid input: bad circuit fields, incompatible representation, malformed config.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that ran but produced something unusable (non-Hermitian input,
/// non-finite matrix entries, solver failure).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sincdvr
