#pragma once

#include <stdexcept>
#include <string>

namespace photonsurf {

enum class ErrorCode {
    InvalidArgument,
    UnknownFamily,
    EmptyExterior,
    NonIntegrable,
    OutOfDomain,
    ForbiddenRadius,
    StepUnderflow,
    TooFewSamples,
    IncompatibleIsotropic,
    PrincipalNull,
    MinimalSurface,
    ConfigParse,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::UnknownFamily: return "unknown-family";
        case ErrorCode::EmptyExterior: return "empty-exterior";
        case ErrorCode::NonIntegrable: return "non-integrable";
        case ErrorCode::OutOfDomain: return "out-of-domain";
        case ErrorCode::ForbiddenRadius: return "forbidden-radius";
        case ErrorCode::StepUnderflow: return "step-underflow";
        case ErrorCode::TooFewSamples: return "too-few-samples";
        case ErrorCode::IncompatibleIsotropic: return "incompatible-isotropic";
        case ErrorCode::PrincipalNull: return "principal-null";
        case ErrorCode::MinimalSurface: return "minimal-surface";
        case ErrorCode::ConfigParse: return "config-parse";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace photonsurf
