#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace apxsum {

/// Item values, targets and set elements. Inputs are limited to 63 bits.
using Value = std::int64_t;

/// Intermediate width for packing and reductions that can exceed 63 bits.
using Wide = __int128;

inline constexpr Value kMaxValue = std::numeric_limits<Value>::max();

/// Reserved cap meaning "no upper universe bound".
inline constexpr Value kUncapped = std::numeric_limits<Value>::max();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Raised when a request would exceed a configured memory or size budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

inline Value checked_add(Value a, Value b) {
  Value r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline Value checked_mul(Value a, Value b) {
  Value r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline bool fits_value(Wide w) {
  return w <= static_cast<Wide>(kMaxValue) && w >= -static_cast<Wide>(kMaxValue);
}

inline Value narrow(Wide w) {
  if (!fits_value(w)) throw OverflowError("value does not fit in 63 bits");
  return static_cast<Value>(w);
}

std::string to_string(Wide w);

/// ceil(log2(x)) for x >= 1; 0 for x <= 1.
int ceil_log2(Wide x);

/// floor(log2(x)) for x >= 1.
int floor_log2(Wide x);

/// Exact positive rational number, used for ε.
struct Rational {
  Value num = 0;
  Value den = 1;

  /// Accepts "0.01", "1/64", "2^-6" and "1e-3".
  static Rational parse(std::string_view text);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  /// floor(this * x) for x >= 0.
  Value floor_times(Value x) const;

  bool operator==(const Rational&) const = default;
};

/// Requires 0 < eps < 1.
void require_open_unit(const Rational& eps);

}  // namespace apxsum
