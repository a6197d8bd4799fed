#include "renewal/error.hpp"

namespace renewal {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::ZeroDistribution: return "ZeroDistribution";
    case ErrorCode::InfiniteMean: return "InfiniteMean";
    case ErrorCode::MassMismatch: return "MassMismatch";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::TailExceedsOne: return "TailExceedsOne";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::SpecViolation: return "SpecViolation";
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::NotRenewable: return "NotRenewable";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::PatternTooLong: return "PatternTooLong";
    case ErrorCode::ZeroProbability: return "ZeroProbability";
    case ErrorCode::ImpossibleHistory: return "ImpossibleHistory";
    case ErrorCode::InvalidMean: return "InvalidMean";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::SecondMomentInfinite: return "SecondMomentInfinite";
    case ErrorCode::HorizonInsufficient: return "HorizonInsufficient";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

bool Error::is_config_error() const noexcept {
    switch (code_) {
    case ErrorCode::ConfigError:
    case ErrorCode::IoError:
    case ErrorCode::NegativeMass:
    case ErrorCode::ZeroDistribution:
    case ErrorCode::MassMismatch:
    case ErrorCode::InvalidLambda:
    case ErrorCode::InvalidExponent:
    case ErrorCode::TailExceedsOne:
    case ErrorCode::SpecViolation:
    case ErrorCode::InvalidMean:
    case ErrorCode::PatternTooLong:
    case ErrorCode::WindowTooLarge:
    case ErrorCode::UnsupportedFamily:
        return true;
    default:
        return false;
    }
}

}  // namespace renewal
