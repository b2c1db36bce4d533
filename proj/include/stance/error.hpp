#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stance {

enum class ErrorCode {
  InvalidArgument,
  // corpus
  EmptyTopic,
  OutOfRange,
  NoValidTopic,
  TooFewDocuments,
  InsufficientData,
  MalformedRecord,
  // topicx
  UnbalancedParens,
  EmptyInput,
  MalformedTree,
  // embed
  EmptyCorpus,
  EmptySequence,
  DimMismatch,
  BadMagic,
  VersionMismatch,
  TruncatedFile,
  NoVocabOverlap,
  ZeroVector,
  // gtr
  BadK,
  BadRange,
  UnassignedExample,
  // model
  EmptyDocument,
  BadLabel,
  StaleCache,
  ShapeMismatch,
  MissingEmbedding,
  EmptyTrainSet,
  ModeUnavailable,
  EmptySpace,
  EmptyScores,
  // eval
  LengthMismatch,
  MissingPrediction,
  CannotFlip,
  NoClusters,
  LexiconConflict,
  Io,
};

inline std::string_view to_string(ErrorCode code);

/// Error raised by every library operation. The code identifies the failure
/// class named in the operation contracts; the message carries the detail
/// (offending file, line, key, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyTopic: return "EmptyTopic";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoValidTopic: return "NoValidTopic";
    case ErrorCode::TooFewDocuments: return "TooFewDocuments";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::UnbalancedParens: return "UnbalancedParens";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::NoVocabOverlap: return "NoVocabOverlap";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::UnassignedExample: return "UnassignedExample";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::StaleCache: return "StaleCache";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::EmptyTrainSet: return "EmptyTrainSet";
    case ErrorCode::ModeUnavailable: return "ModeUnavailable";
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::EmptyScores: return "EmptyScores";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingPrediction: return "MissingPrediction";
    case ErrorCode::CannotFlip: return "CannotFlip";
    case ErrorCode::NoClusters: return "NoClusters";
    case ErrorCode::LexiconConflict: return "LexiconConflict";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace stance
