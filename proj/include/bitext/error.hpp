#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bitext {

enum class ErrorCode {
  InvalidArgument,
  Io,
  // corpus
  InvalidDocument,
  MissingMetadata,
  DuplicateDocument,
  UnknownLanguage,
  // embeddings
  ZeroVector,
  DimensionMismatch,
  FormatError,
  TruncatedFile,
  ProviderUnavailable,
  PartialResponse,
  // index
  InsufficientData,
  DimensionNotDivisible,
  DuplicateId,
  EmptyIndex,
  // refine / evaluation
  DetectorUnavailable,
  LengthMismatch,
  DegenerateInput,
  // orchestration
  ConfigError,
  StageFailure,
};

std::string_view to_string(ErrorCode code);

/// Single exception type carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define BITEXT_THROW(code, msg) throw ::bitext::Error(::bitext::ErrorCode::code, (msg))

#define BITEXT_CHECK(cond, code, msg) \
  do {                                \
    if (!(cond)) BITEXT_THROW(code, msg); \
  } while (0)

}  // namespace bitext
