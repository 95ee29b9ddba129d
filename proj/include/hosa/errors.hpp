#pragma once

#include <stdexcept>
#include <string>

namespace hosa {

enum class ErrorKind {
    NotFound,
    UnsupportedEncoding,
    MalformedHeader,
    InputTooShort,
    LagOutOfRange,
    NoActiveFrames,
    TooFewSegments,
    TestOrderViolation,
    IncompleteResult,
    FrequencyOutOfRange,
    ParameterOutOfRange,
    EmptyScatter,
    ConfigMismatch,
    DegenerateInput,
    InvalidArgument,
    IoFailure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace hosa
