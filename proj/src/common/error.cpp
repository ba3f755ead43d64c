#include "common/error.hpp"

namespace cyents {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnknownType: return "UnknownType";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kSpanOutOfBounds: return "SpanOutOfBounds";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kOverlappingSpans: return "OverlappingSpans";
    case ErrorCode::kDocMismatch: return "DocMismatch";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kLabelOutsideSchema: return "LabelOutsideSchema";
    case ErrorCode::kEmptyGazetteer: return "EmptyGazetteer";
    case ErrorCode::kNetwork: return "NetworkError";
    case ErrorCode::kFeedParse: return "FeedParseError";
    case ErrorCode::kEmptyExtraction: return "EmptyExtraction";
    case ErrorCode::kClient: return "ClientError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kUnknownAnnotator: return "UnknownAnnotator";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace cyents
