#pragma once

#include <stdexcept>
#include <string>

namespace sarkisov {

/// Error taxonomy shared by the whole engine. The CLI maps kinds to exit
/// codes: invalid input -> 2, caps -> 3, unsupported -> 4.
enum class ErrorKind {
    InvalidInput,
    NotSubdividable,
    NoOpSubdivision,
    UnsupportedInput,
    NotRelativelyAmple,
    InvalidState,
    InvalidProfile,
    StepCapExceeded,
    CapExceeded,
    ImpossibleInDim2,
    PreconditionViolation,
    MonotonicityViolation,
    InternalInvariantViolation,
};

class EngineError : public std::runtime_error {
public:
    EngineError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NotSubdividable: return "NotSubdividable";
        case ErrorKind::NoOpSubdivision: return "NoOp";
        case ErrorKind::UnsupportedInput: return "UnsupportedInput";
        case ErrorKind::NotRelativelyAmple: return "NotRelativelyAmple";
        case ErrorKind::InvalidState: return "InvalidState";
        case ErrorKind::InvalidProfile: return "InvalidProfile";
        case ErrorKind::StepCapExceeded: return "StepCapExceeded";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::ImpossibleInDim2: return "ImpossibleInDim2";
        case ErrorKind::PreconditionViolation: return "PreconditionViolation";
        case ErrorKind::MonotonicityViolation: return "MonotonicityViolation";
        case ErrorKind::InternalInvariantViolation: return "InternalInvariantViolation";
    }
    return "EngineError";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw EngineError(kind, std::string(error_kind_name(kind)) + ": " + msg);
}

} // namespace sarkisov
