#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmds {

enum class ErrorKind {
    InvalidArgument,
    NotPrime,
    NotPrimePower,
    Overflow,
    DivisionByZero,
    FieldMismatch,
    Singular,
    EvenCharacteristic,
    ScanLimitExceeded,
    BadIndex,
    KOutOfRange,
    ArcPropertyViolated,
    DimensionMismatch,
    BudgetExceeded,
    PointOnCurve,
    NoFrameFound,
    NoWitnessFound,
    FrameViolation,
    HypothesisNotMet,
    Parse,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NotPrime: return "NotPrime";
        case ErrorKind::NotPrimePower: return "NotPrimePower";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::Singular: return "Singular";
        case ErrorKind::EvenCharacteristic: return "EvenCharacteristic";
        case ErrorKind::ScanLimitExceeded: return "ScanLimitExceeded";
        case ErrorKind::BadIndex: return "BadIndex";
        case ErrorKind::KOutOfRange: return "KOutOfRange";
        case ErrorKind::ArcPropertyViolated: return "ArcPropertyViolated";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::PointOnCurve: return "PointOnCurve";
        case ErrorKind::NoFrameFound: return "NoFrameFound";
        case ErrorKind::NoWitnessFound: return "NoWitnessFound";
        case ErrorKind::FrameViolation: return "FrameViolation";
        case ErrorKind::HypothesisNotMet: return "HypothesisNotMet";
        case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

/// Every failure raised by the library. The kind is the stable, testable part;
/// the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace nmds
