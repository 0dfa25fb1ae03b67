#include "reflectbench/econ/money.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "reflectbench/core/errors.hpp"

namespace reflectbench {

namespace {

constexpr __int128 pow10(int n) {
  __int128 v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

}  // namespace

Money Money::parse(std::string_view text) {
  const std::string original(text);
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kParse, "bad money amount '" + original + "': " + why);
  };
  size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';

  __int128 digits = 0;
  int frac_digits = 0;
  bool any = false;
  bool in_frac = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !in_frac) {
      in_frac = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      any = true;
      if (digits > pow10(36)) throw fail("too large");
      digits = digits * 10 + (c - '0');
      if (in_frac) ++frac_digits;
    } else {
      break;
    }
  }
  if (!any) throw fail("no digits");
  int exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    const auto* first = text.data() + i;
    const auto* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr == first) throw fail("bad exponent");
    i = static_cast<size_t>(ptr - text.data());
  }
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) throw fail("trailing characters");

  int shift = kScaleDigits - frac_digits + exponent;
  if (shift >= 0) {
    if (shift > 38) throw fail("too large");
    digits *= pow10(shift);
  } else {
    // Dropping digits is only allowed when they are zeros.
    while (shift < 0) {
      if (digits % 10 != 0) throw fail("more than 18 decimals");
      digits /= 10;
      ++shift;
    }
  }
  return from_units(negative ? -digits : digits);
}

Money Money::from_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorCode::kParse, "unrepresentable money amount");
  return parse(std::string_view(buf, static_cast<size_t>(ptr - buf)));
}

double Money::to_double() const {
  const __int128 scale = pow10(kScaleDigits);
  const __int128 whole = units_ / scale;
  const __int128 frac = units_ % scale;
  return static_cast<double>(whole) + static_cast<double>(frac) / static_cast<double>(scale);
}

std::string Money::to_string() const {
  __int128 v = units_;
  const bool negative = v < 0;
  if (negative) v = -v;
  const __int128 scale = pow10(kScaleDigits);
  __int128 whole = v / scale;
  __int128 frac = v % scale;

  std::string w;
  do {
    w.insert(w.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
    whole /= 10;
  } while (whole > 0);
  std::string f(kScaleDigits, '0');
  for (int k = kScaleDigits - 1; k >= 0; --k) {
    f[static_cast<size_t>(k)] = static_cast<char>('0' + static_cast<int>(frac % 10));
    frac /= 10;
  }
  while (!f.empty() && f.back() == '0') f.pop_back();
  std::string out = negative ? "-" + w : w;
  if (!f.empty()) out += "." + f;
  return out;
}

Money Money::scaled(std::int64_t num, std::int64_t den) const {
  if (den == 0) throw Error(ErrorCode::kValidation, "money scaled by zero denominator");
  return from_units(units_ * num / den);
}

Money Money::for_tokens(std::int64_t tokens, Money rate_per_1k) {
  return rate_per_1k.scaled(tokens, 1000);
}

}  // namespace reflectbench
