#include "tabalign/errors.hpp"

namespace tabalign {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::OverlappingCells: return "OverlappingCells";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::MissingIndex: return "MissingIndex";
    case ErrorCode::TokenStreamInvalid: return "TokenStreamInvalid";
    case ErrorCode::BoxCountMismatch: return "BoxCountMismatch";
    case ErrorCode::TargetNotFound: return "TargetNotFound";
    case ErrorCode::ResultInvalid: return "ResultInvalid";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DuplicatePrediction: return "DuplicatePrediction";
    case ErrorCode::JoinError: return "JoinError";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::UnknownTable: return "UnknownTable";
    case ErrorCode::UnknownLayer: return "UnknownLayer";
    case ErrorCode::ManifestError: return "ManifestError";
    case ErrorCode::OptionsError: return "OptionsError";
    case ErrorCode::CanonicalizationConflict: return "CanonicalizationConflict";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace tabalign
