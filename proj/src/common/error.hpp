#pragma once

#include <stdexcept>
#include <string>

namespace cyents {

// Every domain failure in the core maps to exactly one of these codes. The C
// API forwards them unchanged as cyents_status values.
enum class ErrorCode {
  kInvalidArgument = 1,
  kUnknownType,
  kIo,
  kParse,
  kSpanOutOfBounds,
  kUnknownLabel,
  kOverlappingSpans,
  kDocMismatch,
  kEmptyDataset,
  kLabelOutsideSchema,
  kEmptyGazetteer,
  kNetwork,
  kFeedParse,
  kEmptyExtraction,
  kClient,
  kValidation,
  kUnknownAnnotator,
  kInsufficientData,
  kNotFound,
  kInternal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Line-numbered failure while reading a JSONL file.
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cyents
