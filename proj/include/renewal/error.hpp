#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace renewal {

enum class ErrorCode {
    NegativeMass,
    ZeroDistribution,
    InfiniteMean,
    MassMismatch,
    InvalidLambda,
    InvalidExponent,
    TailExceedsOne,
    UnsupportedFamily,
    SpecViolation,
    NonPositiveEntry,
    NotRenewable,
    HorizonTooShort,
    PatternTooLong,
    ZeroProbability,
    ImpossibleHistory,
    InvalidMean,
    WindowTooLarge,
    SecondMomentInfinite,
    HorizonInsufficient,
    DegenerateVariance,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Errors raised by the library carry a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    // Configuration and input-validation failures, as opposed to numerical ones.
    bool is_config_error() const noexcept;

private:
    ErrorCode code_;
};

}  // namespace renewal
