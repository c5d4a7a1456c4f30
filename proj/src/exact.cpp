#include "bplab/exact.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>

namespace bplab {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw PreconditionError("not an exact rational (expected P/Q): '" + std::string(text) + "'");

  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0)
    throw PreconditionError("zero denominator in '" + std::string(text) + "'");
  Rational out(negative ? mpz_class(-n) : n, d);
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& value) {
  return value.get_str();
}

std::string to_string(Wide value) {
  if (value == 0)
    return "0";
  const bool negative = value < 0;
  // Work on the negative side so that the minimum value does not overflow.
  Wide v = negative ? value : -value;
  std::string digits;
  while (v != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
    v /= 10;
  }
  if (negative)
    digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Rational to_rational(Wide numerator, std::int64_t scale) {
  Rational out(mpz_class(to_string(numerator), 10), mpz_class(static_cast<long>(scale)));
  out.canonicalize();
  return out;
}

std::int64_t to_int64(const Rational& value) {
  if (value.get_den() != 1 || !value.get_num().fits_slong_p())
    throw MagnitudeOverflow("value " + to_string(value) + " is not a 64-bit integer");
  static_assert(sizeof(long) == sizeof(std::int64_t));
  return value.get_num().get_si();
}

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  if (a <= 0 || b <= 0)
    throw PreconditionError("lcm of non-positive values");
  const std::int64_t g = std::gcd(a, b);
  std::int64_t out;
  if (__builtin_mul_overflow(a / g, b, &out))
    throw MagnitudeOverflow("common denominator exceeds 64 bits");
  return out;
}

} // namespace bplab
