#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tbl {

/// Failure categories shared by every module. The CLI maps these onto exit codes.
enum class ErrorCode {
  Domain,
  InvalidNetwork,
  Singular,
  AstableCircuit,
  TooManyValves,
  NonConvergence,
  NoOscillation,
  CalibrationFailed,
  SyntaxError,
  DuplicateId,
  UnknownUnit,
  UnknownKeyword,
  EvenRing,
  UnboundPort,
  SupplyMissing,
  IndeterminateLevel,
  UnknownVariable,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Short "%g" rendering of a number for diagnostics.
std::string diag_number(double x);

struct TextLocation {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<TextLocation> where = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<TextLocation>& where() const noexcept { return where_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<TextLocation> where_;
  std::string detail_;
};

}  // namespace tbl
