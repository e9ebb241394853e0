#include "rmtcorr/error.hpp"

namespace rmtcorr {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::DuplicateCell: return "DuplicateCell";
        case ErrorCode::TooSmall: return "TooSmall";
        case ErrorCode::LeadingGapUnfillable: return "LeadingGapUnfillable";
        case ErrorCode::EmptyTicker: return "EmptyTicker";
        case ErrorCode::UnknownCategoryLabel: return "UnknownCategoryLabel";
        case ErrorCode::IntervalTooLarge: return "IntervalTooLarge";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::QBelowOne: return "QBelowOne";
        case ErrorCode::ModeOutOfRange: return "ModeOutOfRange";
        case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
        case ErrorCode::OrderingUnsatisfiable: return "OrderingUnsatisfiable";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string subject)
    : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

}  // namespace rmtcorr
