#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smm {

enum class ErrorCode {
  // belief_core
  StaleEvent,
  RetractMissing,
  ActorMismatch,
  InvalidProposition,
  // discrepancy_engine
  DuplicateOwner,
  UnknownAgent,
  // episode_tracker
  MixedTeamOrLevel,
  DuplicateEpisode,
  MissingLevel,
  // predictor
  EmptyPredictorSet,
  InvalidWeights,
  SchemeMismatch,
  UnknownTarget,
  LengthMismatch,
  DegenerateVariance,
  // scoring
  UnknownElement,
  InvalidTarget,
  // synth_gen
  InvalidConfig,
  // io_ingest
  ParseError,
  UnknownVersion,
  DanglingReference,
  OrdinalRegression,
  OutOfRangeTime,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::StaleEvent: return "StaleEvent";
    case ErrorCode::RetractMissing: return "RetractMissing";
    case ErrorCode::ActorMismatch: return "ActorMismatch";
    case ErrorCode::InvalidProposition: return "InvalidProposition";
    case ErrorCode::DuplicateOwner: return "DuplicateOwner";
    case ErrorCode::UnknownAgent: return "UnknownAgent";
    case ErrorCode::MixedTeamOrLevel: return "MixedTeamOrLevel";
    case ErrorCode::DuplicateEpisode: return "DuplicateEpisode";
    case ErrorCode::MissingLevel: return "MissingLevel";
    case ErrorCode::EmptyPredictorSet: return "EmptyPredictorSet";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::SchemeMismatch: return "SchemeMismatch";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::OrdinalRegression: return "OrdinalRegression";
    case ErrorCode::OutOfRangeTime: return "OutOfRangeTime";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

// Where in an input file an error was found. Line and column are one-based;
// `pointer` is a JSON pointer into the offending document or record.
struct SourceLocation {
  std::string file;
  std::uint64_t line = 0;
  std::uint64_t column = 0;
  std::string pointer;

  std::string str() const {
    std::string s = file.empty() ? "<input>" : file;
    if (line != 0) {
      s += ':' + std::to_string(line);
      if (column != 0) s += ':' + std::to_string(column);
    }
    if (!pointer.empty()) s += " (at " + pointer + ')';
    return s;
  }
};

// Every failure in the library is reported through this type; the code is
// the stable, machine-checkable part and `what()` the human-readable one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  Error(ErrorCode code, const std::string& message, SourceLocation where)
      : std::runtime_error(where.str() + ": " + std::string(to_string(code)) +
                           ": " + message),
        code_(code),
        detail_(message),
        where_(std::move(where)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::optional<SourceLocation>& where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<SourceLocation> where_;
};

}  // namespace smm
