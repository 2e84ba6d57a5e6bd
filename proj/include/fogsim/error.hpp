#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fogsim {

enum class ErrorKind {
    InvalidLink,
    EmptyPath,
    InvalidSharing,
    InvalidDelay,
    InvalidRate,
    InvalidCapacity,
    InvalidUnit,
    InvalidNode,
    InvalidFactor,
    Division,
    UndefinedAvailability,
    OutOfRange,
    InsufficientHistory,
    InconsistentCounters,
    Config,
    Usage,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every model-level failure surfaces as this exception; `kind()` lets callers
/// and tests tell the contract violations apart without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace fogsim
