#include "pairstat/error.hpp"

namespace pairstat {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::NonIntegerCategoryLabel: return "NonIntegerCategoryLabel";
    case ErrorCode::NegativeLabel: return "NegativeLabel";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::TableTooLarge: return "TableTooLarge";
    case ErrorCode::ExactModeWithTies: return "ExactModeWithTies";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::NonSquareSymmetric: return "NonSquareSymmetric";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::SampleCountMismatch: return "SampleCountMismatch";
    case ErrorCode::UnsupportedOutputForTest: return "UnsupportedOutputForTest";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::EmptyMatrix:
    case ErrorCode::NonIntegerCategoryLabel:
    case ErrorCode::NegativeLabel:
    case ErrorCode::LabelOutOfRange:
        return true;
    default:
        return false;
    }
}

}  // namespace pairstat
