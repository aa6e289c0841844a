#pragma once

#include <stdexcept>
#include <string>

namespace tabalign {

enum class ErrorCode {
  OverlappingCells,
  OutOfRange,
  MalformedXml,
  MissingIndex,
  TokenStreamInvalid,
  BoxCountMismatch,
  TargetNotFound,
  ResultInvalid,
  SchemaVersionMismatch,
  ValidationFailure,
  EmptyGrid,
  TooLarge,
  DuplicatePrediction,
  JoinError,
  EmptyDataset,
  UnknownTable,
  UnknownLayer,
  ManifestError,
  OptionsError,
  CanonicalizationConflict,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tabalign
