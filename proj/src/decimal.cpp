#include "tbl/decimal.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace tbl {

Decimal::Decimal(std::int64_t coeff, int exp) : coeff_(coeff), exp_(exp) {
  if (coeff_ == 0) {
    exp_ = 0;
    return;
  }
  while (coeff_ % 10 == 0) {
    coeff_ /= 10;
    ++exp_;
  }
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  std::int64_t coeff = 0;
  int digits = 0;       // significant digits accumulated
  int exp = 0;
  bool any = false;
  bool leading = true;
  auto take = [&](char c, bool fractional) -> bool {
    any = true;
    const int d = c - '0';
    if (leading && d == 0) {
      if (fractional) --exp;
      return true;
    }
    leading = false;
    if (digits == 18) return false;
    coeff = coeff * 10 + d;
    ++digits;
    if (fractional) --exp;
    return true;
  };
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    if (!take(text[i++], false)) return std::nullopt;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      if (!take(text[i++], true)) return std::nullopt;
    }
  }
  if (!any) return std::nullopt;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    int e = 0;
    const char* first = text.data() + i;
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc{} || ptr == first) return std::nullopt;
    if (e > 400 || e < -400) return std::nullopt;
    exp += e;
    i = static_cast<std::size_t>(ptr - text.data());
  }
  if (i != text.size()) return std::nullopt;
  return Decimal(negative ? -coeff : coeff, exp);
}

Decimal Decimal::from_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  auto parsed = parse(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  return parsed.value_or(Decimal{});
}

double Decimal::to_double() const {
  const std::string s = std::to_string(coeff_) + "e" + std::to_string(exp_);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

std::string Decimal::to_string() const {
  if (coeff_ == 0) return "0";
  std::string digits = std::to_string(coeff_ < 0 ? -coeff_ : coeff_);
  std::string sign = coeff_ < 0 ? "-" : "";
  const int n = static_cast<int>(digits.size());
  // Plain notation for reasonable magnitudes, scientific otherwise.
  if (exp_ >= 0 && exp_ + n <= 16) return sign + digits + std::string(static_cast<std::size_t>(exp_), '0');
  if (exp_ < 0 && -exp_ < n) {
    const auto split = static_cast<std::size_t>(n + exp_);
    return sign + digits.substr(0, split) + "." + digits.substr(split);
  }
  if (exp_ < 0 && -exp_ - n <= 6) {
    return sign + "0." + std::string(static_cast<std::size_t>(-exp_ - n), '0') + digits;
  }
  std::string mantissa = digits.substr(0, 1);
  if (n > 1) mantissa += "." + digits.substr(1);
  return sign + mantissa + "e" + std::to_string(exp_ + n - 1);
}

bool Decimal::magnitude_at_least_one() const {
  if (coeff_ == 0) return false;
  const int n = static_cast<int>(std::to_string(coeff_ < 0 ? -coeff_ : coeff_).size());
  return exp_ + n - 1 >= 0;
}

}  // namespace tbl
