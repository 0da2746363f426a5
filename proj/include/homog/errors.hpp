#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace homog {

/// Stable, machine-readable error categories. The CLI maps them to exit codes.
enum class ErrorCode {
  Domain,           // argument outside the mathematical/physical domain
  HomogenizationDomain,  // nonpositive effect at a log-space probe
  TailOverflow,     // cdf numerically 0 or 1
  Degenerate,       // zero-variance variable with a nontrivial PSF, n_E = 0, ...
  Unsupported,      // combination without a defined formula
  NoCrossing,       // target reliability above the RSP peak
  Numerical,        // internal cross-check failed
  Syntax,           // DSL parse error
  Evaluation,       // DSL evaluation error
  Config,           // malformed or inconsistent configuration
};

inline std::string_view code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Domain: return "E_DOMAIN";
    case ErrorCode::HomogenizationDomain: return "E_HOMOG_DOMAIN";
    case ErrorCode::TailOverflow: return "E_TAIL_OVERFLOW";
    case ErrorCode::Degenerate: return "E_DEGENERATE";
    case ErrorCode::Unsupported: return "E_UNSUPPORTED";
    case ErrorCode::NoCrossing: return "E_NO_CROSSING";
    case ErrorCode::Numerical: return "E_NUMERICAL";
    case ErrorCode::Syntax: return "E_SYNTAX";
    case ErrorCode::Evaluation: return "E_EVAL";
    case ErrorCode::Config: return "E_CONFIG";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::Config, what) {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column, std::string token)
      : Error(ErrorCode::Syntax, format(message, line, column, token)),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  static std::string format(const std::string& message, int line, int column,
                            const std::string& token) {
    std::string s = "syntax error at line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + message;
    if (!token.empty()) s += " (near '" + token + "')";
    return s;
  }

  int line_;
  int column_;
  std::string token_;
};

class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& message, std::string subexpression)
      : Error(ErrorCode::Evaluation,
              subexpression.empty() ? message : message + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

}  // namespace homog
