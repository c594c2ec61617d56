#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace soundclust {

enum class ErrorCode {
  kMalformedJson,
  kDuplicateId,
  kDimensionMismatch,
  kMissingFeatures,
  kUnknownId,
  kUnlabeledDocument,
  kSingleClass,
  kEmptyFrames,
  kTooFewSamples,
  kEmptyVocabulary,
  kTooFewNodes,
  kKTooLarge,
  kEmptyGraph,
  kUnknownCluster,
  kTooFewClusters,
  kDegenerateClustering,
  kZeroWithinVariance,
  kLengthMismatch,
  kTooManyDocuments,
  kInvalidArgument,
  kIo,
};

// Stable machine-readable name, used in HTTP error bodies and CLI messages.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace soundclust
