#include "apxsum/types.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace apxsum {

std::string to_string(Wide w) {
  if (w == 0) return "0";
  const bool negative = w < 0;
  unsigned __int128 u = negative ? -static_cast<unsigned __int128>(w) : static_cast<unsigned __int128>(w);
  std::string digits;
  while (u > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

int ceil_log2(Wide x) {
  int r = 0;
  Wide p = 1;
  while (p < x) {
    p <<= 1;
    ++r;
  }
  return r;
}

int floor_log2(Wide x) {
  if (x < 1) throw PreconditionError("floor_log2 of non-positive value");
  int r = 0;
  while (x > 1) {
    x >>= 1;
    ++r;
  }
  return r;
}

namespace {

Value parse_int(std::string_view s) {
  Value v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("malformed number '" + std::string(s) + "'");
  }
  return v;
}

Rational reduced(Wide num, Wide den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide a = num < 0 ? -num : num;
  Wide b = den;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational{narrow(num), narrow(den)};
}

Wide pow10(int e) {
  Wide r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw ValidationError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return reduced(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  if (auto caret = text.find('^'); caret != std::string_view::npos) {
    const Value base = parse_int(text.substr(0, caret));
    const Value exp = parse_int(text.substr(caret + 1));
    if (base < 1 || exp > 0 || exp < -60) throw ValidationError("unsupported power '" + std::string(text) + "'");
    Wide den = 1;
    for (Value i = 0; i < -exp; ++i) {
      den *= base;
      if (den > static_cast<Wide>(kMaxValue)) throw ValidationError("power too small");
    }
    return reduced(1, den);
  }
  int exponent = 0;
  std::string_view mantissa = text;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    exponent = static_cast<int>(parse_int(text.substr(e + 1)));
    mantissa = text.substr(0, e);
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_dot = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_dot) throw ValidationError("malformed decimal '" + std::string(text) + "'");
      seen_dot = true;
    } else {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    }
  }
  if (digits.empty() || digits.size() > 18) throw ValidationError("malformed decimal '" + std::string(text) + "'");
  Wide num = parse_int(digits);
  int scale = frac_digits - exponent;
  if (scale > 36 || scale < -18) throw ValidationError("decimal out of range");
  if (scale >= 0) return reduced(num, pow10(scale));
  return reduced(num * pow10(-scale), 1);
}

std::string Rational::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

Value Rational::floor_times(Value x) const {
  return narrow(static_cast<Wide>(num) * x / den);
}

void require_open_unit(const Rational& eps) {
  if (eps.den <= 0 || eps.num <= 0 || eps.num >= eps.den) {
    throw PreconditionError("epsilon must lie strictly between 0 and 1, got " + eps.to_string());
  }
}

}  // namespace apxsum
