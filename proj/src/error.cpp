#include "bitext/error.hpp"

namespace bitext {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::InvalidDocument: return "InvalidDocument";
    case ErrorCode::MissingMetadata: return "MissingMetadata";
    case ErrorCode::DuplicateDocument: return "DuplicateDocument";
    case ErrorCode::UnknownLanguage: return "UnknownLanguage";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::PartialResponse: return "PartialResponse";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::DimensionNotDivisible: return "DimensionNotDivisible";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::DetectorUnavailable: return "DetectorUnavailable";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::StageFailure: return "StageFailure";
  }
  return "Unknown";
}

}  // namespace bitext
