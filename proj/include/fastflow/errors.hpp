#pragma once

#include <stdexcept>

namespace fastflow {

/// Malformed config file, bad field id, invalid/missing parameters.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A state, velocity or loss became non-finite during integration or training.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fastflow
