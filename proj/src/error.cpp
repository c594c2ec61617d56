#include "soundclust/error.hpp"

namespace soundclust {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedJson: return "MalformedJson";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingFeatures: return "MissingFeatures";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kUnlabeledDocument: return "UnlabeledDocument";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kEmptyFrames: return "EmptyFrames";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kTooFewNodes: return "TooFewNodes";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kUnknownCluster: return "UnknownCluster";
    case ErrorCode::kTooFewClusters: return "TooFewClusters";
    case ErrorCode::kDegenerateClustering: return "DegenerateClustering";
    case ErrorCode::kZeroWithinVariance: return "ZeroWithinVariance";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooManyDocuments: return "TooManyDocuments";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace soundclust
