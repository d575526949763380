#include "tbl/error.hpp"

#include <cstdio>

namespace tbl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::InvalidNetwork: return "InvalidNetwork";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::AstableCircuit: return "AstableCircuit";
    case ErrorCode::TooManyValves: return "TooManyValves";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NoOscillation: return "NoOscillation";
    case ErrorCode::CalibrationFailed: return "CalibrationFailed";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::UnknownKeyword: return "UnknownKeyword";
    case ErrorCode::EvenRing: return "EvenRing";
    case ErrorCode::UnboundPort: return "UnboundPort";
    case ErrorCode::SupplyMissing: return "SupplyMissing";
    case ErrorCode::IndeterminateLevel: return "IndeterminateLevel";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
  }
  return "Error";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::optional<TextLocation>& where) {
  std::string out;
  if (where) {
    out += std::to_string(where->line) + ":" + std::to_string(where->column) + ": ";
  }
  out += to_string(code);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<TextLocation> where)
    : std::runtime_error(compose(code, message, where)),
      code_(code),
      where_(where),
      detail_(message) {}

std::string diag_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace tbl
