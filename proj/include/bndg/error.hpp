#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bndg {

enum class ErrorCode {
  unreachable,
  disconnected,
  too_large,
  infeasible,
  no_feasible_action,
  support_too_large,
  strategy_space_too_large,
  no_convergence,
  zero_optimum,
  parse_error,
  validation_error,
  overflow,
  invalid_argument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::unreachable: return "Unreachable";
    case ErrorCode::disconnected: return "Disconnected";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::infeasible: return "Infeasible";
    case ErrorCode::no_feasible_action: return "NoFeasibleAction";
    case ErrorCode::support_too_large: return "SupportTooLarge";
    case ErrorCode::strategy_space_too_large: return "StrategySpaceTooLarge";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::zero_optimum: return "ZeroOptimum";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::validation_error: return "ValidationError";
    case ErrorCode::overflow: return "Overflow";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(ErrorCode::validation_error, field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace bndg
