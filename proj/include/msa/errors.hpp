#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msa {

/// Error categories used across the library. Each corresponds to a named
/// contract violation of one of the analysis operations.
enum class ErrorCode {
    ZeroVariance,
    NonPositiveValue,
    InsufficientData,
    LengthMismatch,
    OutOfRange,
    OutOfGrid,
    GridTooFine,
    GridMismatch,
    EmptyScale,
    NonStationaryFit,
    SingularRegression,
    InvalidHorizon,
    OrderNotFound,
    DiagnosticsFailed,
    ParseError,
    NonPositiveClose,
    NonMonotoneDates,
    MissingMonth,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace msa
