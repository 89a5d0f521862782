#include "msa/errors.hpp"

namespace msa {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::NonPositiveValue: return "NonPositiveValue";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::OutOfGrid: return "OutOfGrid";
        case ErrorCode::GridTooFine: return "GridTooFine";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::EmptyScale: return "EmptyScale";
        case ErrorCode::NonStationaryFit: return "NonStationaryFit";
        case ErrorCode::SingularRegression: return "SingularRegression";
        case ErrorCode::InvalidHorizon: return "InvalidHorizon";
        case ErrorCode::OrderNotFound: return "OrderNotFound";
        case ErrorCode::DiagnosticsFailed: return "DiagnosticsFailed";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NonPositiveClose: return "NonPositiveClose";
        case ErrorCode::NonMonotoneDates: return "NonMonotoneDates";
        case ErrorCode::MissingMonth: return "MissingMonth";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

}  // namespace msa
