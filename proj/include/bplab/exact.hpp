#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace bplab {

/// Exact rational weight value. Canonical form is maintained by gmp after
/// every arithmetic operation; values built from strings are canonicalized
/// by parse_rational.
using Rational = mpq_class;

/// Accumulator for scaled-integer arithmetic (sums of weights, BP messages,
/// tree DP values). Operations that may overflow go through the checked_*
/// helpers below.
using Wide = __int128;

// Thrown when a caller violates a documented precondition. The CLI maps it
// to exit code 2.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// BP never reached the requested state within the horizon (exit code 3).
class HorizonExhausted : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An oracle would exceed its configured size cap (exit code 4).
class OracleCapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Scaled-integer arithmetic left the representable range.
class MagnitudeOverflow : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

/// Parses "P/Q", "-P/Q" or an integer "P". Rejects zero denominators,
/// decimals and anything gmp would silently accept with trailing junk.
Rational parse_rational(std::string_view text);

/// "P/Q" in lowest terms, or "P" when the denominator is 1.
std::string to_string(const Rational& value);

std::string to_string(Wide value);

Rational to_rational(Wide numerator, std::int64_t scale = 1);

/// Exact conversion; throws MagnitudeOverflow when the value is not an
/// integer that fits into 64 bits.
std::int64_t to_int64(const Rational& value);

std::int64_t lcm_checked(std::int64_t a, std::int64_t b);

inline Wide checked_add(Wide a, Wide b) {
  Wide out;
  if (__builtin_add_overflow(a, b, &out))
    throw MagnitudeOverflow("scaled-integer addition overflow");
  return out;
}

inline Wide checked_sub(Wide a, Wide b) {
  Wide out;
  if (__builtin_sub_overflow(a, b, &out))
    throw MagnitudeOverflow("scaled-integer subtraction overflow");
  return out;
}

inline Wide checked_mul(Wide a, Wide b) {
  Wide out;
  if (__builtin_mul_overflow(a, b, &out))
    throw MagnitudeOverflow("scaled-integer multiplication overflow");
  return out;
}

} // namespace bplab
