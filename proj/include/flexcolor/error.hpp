#pragma once

#include <stdexcept>
#include <string>

namespace flexcolor {

// Stable categories; the CLI maps the first six onto its documented exit codes.
enum class ErrorCode {
  parse,
  infeasible_configuration,
  family_violation,
  corrupt_certificate,
  disconnected,
  size_guard,
  embedding_incomplete,
  invalid_graph,
  not_colorable,
  undefined_ratio,
  budget_exceeded,
  domain,
  unknown_name,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse";
    case ErrorCode::infeasible_configuration: return "infeasible-configuration";
    case ErrorCode::family_violation: return "family-violation";
    case ErrorCode::corrupt_certificate: return "corrupt-certificate";
    case ErrorCode::disconnected: return "disconnected";
    case ErrorCode::size_guard: return "size-guard";
    case ErrorCode::embedding_incomplete: return "embedding-incomplete";
    case ErrorCode::invalid_graph: return "invalid-graph";
    case ErrorCode::not_colorable: return "not-colorable";
    case ErrorCode::undefined_ratio: return "undefined-ratio";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::domain: return "domain";
    case ErrorCode::unknown_name: return "unknown-name";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flexcolor
