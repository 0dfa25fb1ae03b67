#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace reflectbench {

// Exact USD amount in units of 1e-18 dollars. Token counts times per-1k rates
// with up to 15 decimals stay exact, so sums never drift.
class Money {
 public:
  static constexpr int kScaleDigits = 18;

  constexpr Money() = default;

  static Money from_units(__int128 units) {
    Money m;
    m.units_ = units;
    return m;
  }
  // Parses "0.003", "-1.5", "2e-3". Throws Error(kParse) on malformed text
  // or more precision than the unit allows.
  static Money parse(std::string_view text);
  // Through the shortest decimal form of the double, so 0.003 stays 0.003.
  static Money from_double(double value);

  __int128 units() const { return units_; }
  double to_double() const;
  // Exact decimal without trailing zeros, e.g. "0.0105".
  std::string to_string() const;

  Money& operator+=(Money o) {
    units_ += o.units_;
    return *this;
  }
  Money& operator-=(Money o) {
    units_ -= o.units_;
    return *this;
  }
  friend Money operator+(Money a, Money b) { return a += b; }
  friend Money operator-(Money a, Money b) { return a -= b; }
  friend bool operator==(Money a, Money b) { return a.units_ == b.units_; }
  friend auto operator<=>(Money a, Money b) { return a.units_ <=> b.units_; }

  // amount * num / den, truncated toward zero.
  Money scaled(std::int64_t num, std::int64_t den) const;

  // tokens / 1000 * rate_per_1k. Exact while the rate has at most 15
  // decimals.
  static Money for_tokens(std::int64_t tokens, Money rate_per_1k);

 private:
  __int128 units_ = 0;
};

}  // namespace reflectbench
