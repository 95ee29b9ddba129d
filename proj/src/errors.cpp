#include "hosa/errors.hpp"

namespace hosa {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::UnsupportedEncoding: return "UnsupportedEncoding";
        case ErrorKind::MalformedHeader: return "MalformedHeader";
        case ErrorKind::InputTooShort: return "InputTooShort";
        case ErrorKind::LagOutOfRange: return "LagOutOfRange";
        case ErrorKind::NoActiveFrames: return "NoActiveFrames";
        case ErrorKind::TooFewSegments: return "TooFewSegments";
        case ErrorKind::TestOrderViolation: return "TestOrderViolation";
        case ErrorKind::IncompleteResult: return "IncompleteResult";
        case ErrorKind::FrequencyOutOfRange: return "FrequencyOutOfRange";
        case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorKind::EmptyScatter: return "EmptyScatter";
        case ErrorKind::ConfigMismatch: return "ConfigMismatch";
        case ErrorKind::DegenerateInput: return "DegenerateInput";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::IoFailure: return "IoFailure";
    }
    return "UnknownError";
}

} // namespace hosa
