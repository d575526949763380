#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tbl {

/// Exact decimal number coeff * 10^exp, kept normalized (no trailing zeros in
/// the coefficient). Unit conversions in the netlist are powers of ten, so
/// they are exponent shifts and never round.
class Decimal {
 public:
  constexpr Decimal() = default;
  Decimal(std::int64_t coeff, int exp);

  /// Accepts [+-]?(digits[.digits]|.digits)([eE][+-]?digits)?; at most 18
  /// significant digits. Returns nullopt on anything else.
  static std::optional<Decimal> parse(std::string_view text);
  /// Shortest decimal that round-trips through double.
  static Decimal from_double(double value);

  std::int64_t coefficient() const { return coeff_; }
  int exponent() const { return exp_; }
  bool is_zero() const { return coeff_ == 0; }
  bool is_integer() const { return exp_ >= 0; }

  Decimal shifted(int places) const { return is_zero() ? *this : Decimal(coeff_, exp_ + places); }
  double to_double() const;
  std::string to_string() const;

  /// Magnitude comparison against 1 (|x| >= 1).
  bool magnitude_at_least_one() const;

  friend bool operator==(const Decimal&, const Decimal&) = default;

 private:
  std::int64_t coeff_ = 0;
  int exp_ = 0;
};

}  // namespace tbl
