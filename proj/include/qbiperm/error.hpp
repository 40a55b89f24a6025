#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbiperm {

enum class ErrorKind {
  ShapeError,
  NotIsometry,
  NotHermitian,
  NotCP,
  NotTracePreserving,
  NotUnital,
  NotStarHom,
  NotCPU,
  NotCPTP,
  NotSingleBlockCodomain,
  IllConditioned,
  WitnessInfeasible,
  WitnessNotNormalized,
  SameComponent,
  SyntaxError,
  TypeError,
  FormatError,
};

std::string_view kind_name(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind; the
/// CLI forwards it verbatim in its JSON error payload.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse errors keep the source position (1-based).
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(ErrorKind::SyntaxError, message + " at " + std::to_string(line) +
                                          ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace qbiperm
