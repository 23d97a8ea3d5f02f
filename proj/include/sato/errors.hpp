#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sato {

enum class ErrorKind {
    DivisionByZero,
    OrderMismatch,
    ZeroScale,
    ZeroSeries,
    NotInvertible,
    BadDegreeRange,
    NotInverse,
    InsufficientPrecision,
    DegenerateLeading,
    UnsupportedLeading,
    InsufficientDepth,
    NotStringQuiver,
    NotCycle,
    InvalidCompanion,
    Resonance,
    IncompatibleLeading,
    EmptyPotential,
    IndexCutoff,
    J0Undefined,
    GuardTooLarge,
    Parse,
    InvalidArgument,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::ZeroScale: return "ZeroScale";
    case ErrorKind::ZeroSeries: return "ZeroSeries";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::BadDegreeRange: return "BadDegreeRange";
    case ErrorKind::NotInverse: return "NotInverse";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::DegenerateLeading: return "DegenerateLeading";
    case ErrorKind::UnsupportedLeading: return "UnsupportedLeading";
    case ErrorKind::InsufficientDepth: return "InsufficientDepth";
    case ErrorKind::NotStringQuiver: return "NotStringQuiver";
    case ErrorKind::NotCycle: return "NotCycle";
    case ErrorKind::InvalidCompanion: return "InvalidCompanion";
    case ErrorKind::Resonance: return "Resonance";
    case ErrorKind::IncompatibleLeading: return "IncompatibleLeading";
    case ErrorKind::EmptyPotential: return "EmptyPotential";
    case ErrorKind::IndexCutoff: return "IndexCutoff";
    case ErrorKind::J0Undefined: return "J0Undefined";
    case ErrorKind::GuardTooLarge: return "GuardTooLarge";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace sato
