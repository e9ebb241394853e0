#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmtcorr {

enum class ErrorCode {
    MalformedRow,
    NonPositivePrice,
    DuplicateCell,
    TooSmall,
    LeadingGapUnfillable,
    EmptyTicker,
    UnknownCategoryLabel,
    IntervalTooLarge,
    ZeroVariance,
    NotSymmetric,
    NoConvergence,
    QBelowOne,
    ModeOutOfRange,
    InfeasibleConfig,
    OrderingUnsatisfiable,
    InvalidArgument,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a stable machine-readable code
/// plus an optional subject (the offending ticker, field or file).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string subject = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }

private:
    ErrorCode code_;
    std::string subject_;
};

}  // namespace rmtcorr
