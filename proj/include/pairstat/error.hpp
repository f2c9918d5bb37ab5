#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairstat {

enum class ErrorCode {
    EmptyMatrix,
    NonIntegerCategoryLabel,
    NegativeLabel,
    LabelOutOfRange,
    DomainError,
    NonConvergence,
    TableTooLarge,
    ExactModeWithTies,
    UnknownMethod,
    NonSquareSymmetric,
    KindMismatch,
    SampleCountMismatch,
    UnsupportedOutputForTest,
    TooLarge,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Input errors are problems with the data itself; everything else is a
// violation of the calling contract (wrong kinds, unsupported flags, ...).
bool is_input_error(ErrorCode code);

class StatsError : public std::runtime_error {
public:
    StatsError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pairstat
