#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qfilter {

/// Operand shapes do not agree (non-square input, mismatched dimensions).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An input violates a documented precondition or invariant. `key()` names
/// the offending field when one is known (e.g. "S" for a non-unitary
/// scattering matrix) so front ends can report it with a full key path.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what, std::string key = {})
        : std::invalid_argument(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Integration broke down: trace underflow, rate-floor violation, a jump on
/// a state with zero jump rate, or non-finite values.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qfilter
