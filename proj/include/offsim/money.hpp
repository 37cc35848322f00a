#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "offsim/error.hpp"

namespace offsim {

/// Exact decimal amount with 3 fractional digits, stored as integer
/// thousandths. Conversions from floating point round half-to-even at the
/// third digit. Balances may go negative; rule-level non-negativity is
/// enforced where the auction rules demand it.
class Money {
public:
  constexpr Money() : millis_(0) {}

  static constexpr Money from_millis(std::int64_t m) { return Money(m); }

  static Money from_double(double v) {
    // llrint honors the default FE_TONEAREST mode, i.e. ties-to-even.
    return Money(static_cast<std::int64_t>(std::llrint(v * 1000.0)));
  }

  static Money parse(const std::string &s) {
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
      throw SimError(ErrorCode::parse_error, "bad money value: '" + s + "'");
    }
    return from_double(v);
  }

  constexpr std::int64_t millis() const { return millis_; }
  double to_double() const { return static_cast<double>(millis_) / 1000.0; }

  /// Scale by a real factor, rounding the result at the third digit.
  Money scaled(double factor) const { return from_double(to_double() * factor); }

  std::string str() const {
    char buf[32];
    std::int64_t m = millis_;
    const char *sign = "";
    if (m < 0) {
      sign = "-";
      m = -m;
    }
    std::snprintf(buf, sizeof(buf), "%s%lld.%03lld", sign,
                  static_cast<long long>(m / 1000),
                  static_cast<long long>(m % 1000));
    return buf;
  }

  constexpr Money operator+(Money o) const { return Money(millis_ + o.millis_); }
  constexpr Money operator-(Money o) const { return Money(millis_ - o.millis_); }
  constexpr Money operator-() const { return Money(-millis_); }
  Money &operator+=(Money o) {
    millis_ += o.millis_;
    return *this;
  }
  Money &operator-=(Money o) {
    millis_ -= o.millis_;
    return *this;
  }

  constexpr auto operator<=>(const Money &) const = default;

private:
  constexpr explicit Money(std::int64_t m) : millis_(m) {}
  std::int64_t millis_;
};

}  // namespace offsim
