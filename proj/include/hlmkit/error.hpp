#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hlmkit {

enum class ErrorCode {
  EmptyDocument,
  EmptyCorpus,
  DegenerateStats,
  ParseError,
  ValidationError,
  MissingScore,
  MissingSurprisal,
  TooSmall,
  MissingKey,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::DegenerateStats: return "DegenerateStats";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::MissingScore: return "MissingScore";
    case ErrorCode::MissingSurprisal: return "MissingSurprisal";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// Every library failure is reported through this type. what() always starts
// with the code name so the CLI can print it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same code, detail prefixed with `context` (e.g. "line 4").
  Error with_context(const std::string& context) const {
    return Error(code_, context + ": " + detail_);
  }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace hlmkit
