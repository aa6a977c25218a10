#include "eopt/rational.hpp"

#include "eopt/errors.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace eopt {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view text) {
  if (text.empty()) {
    throw Error(ErrorCode::ParseError, "empty integer");
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) {
    throw Error(ErrorCode::ParseError, "bad integer '" + std::string(text) + "'");
  }
  cpp_int value = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::ParseError, "bad integer '" + std::string(text) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return negative ? cpp_int(-value) : value;
}

cpp_int pow10(long e) {
  cpp_int p = 1;
  for (long i = 0; i < e; ++i) {
    p *= 10;
  }
  return p;
}

Rational parse_decimal(std::string_view text) {
  std::string_view mantissa = text;
  long exponent = 0;
  if (const auto epos = text.find_first_of("eE"); epos != std::string_view::npos) {
    mantissa = text.substr(0, epos);
    const auto exp_text = text.substr(epos + 1);
    const auto* first = exp_text.data();
    const auto* last = first + exp_text.size();
    if (!exp_text.empty() && exp_text[0] == '+') {
      ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc{} || ptr != last || std::labs(exponent) > 4000) {
      throw Error(ErrorCode::ParseError, "bad exponent in '" + std::string(text) + "'");
    }
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (std::size_t i = 0; i < mantissa.size(); ++i) {
    const char c = mantissa[i];
    if (c == '.') {
      if (seen_point) {
        throw Error(ErrorCode::ParseError, "bad decimal '" + std::string(text) + "'");
      }
      seen_point = true;
    } else {
      digits.push_back(c);
      if (seen_point && c >= '0' && c <= '9') {
        ++fraction_digits;
      }
    }
  }
  if (digits.empty() || digits == "-" || digits == "+") {
    throw Error(ErrorCode::ParseError, "bad decimal '" + std::string(text) + "'");
  }
  Rational value(parse_integer(digits));
  const long shift = exponent - fraction_digits;
  if (shift >= 0) {
    value *= Rational(pow10(shift));
  } else {
    value /= Rational(pow10(-shift));
  }
  return value;
}

}  // namespace

std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) {
    return num.str();
  }
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const cpp_int num = parse_integer(text.substr(0, slash));
    const cpp_int den = parse_integer(text.substr(slash + 1));
    if (den == 0) {
      throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    }
    return Rational(num, den);
  }
  return parse_decimal(text);
}

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite value has no rational form");
  }
  if (x == 0.0) {
    return Rational(0);
  }
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer for every finite double.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational value{cpp_int(scaled)};
  const int shift = exp - 53;
  if (shift >= 0) {
    value *= Rational(cpp_int(1) << shift);
  } else {
    value /= Rational(cpp_int(1) << -shift);
  }
  return value;
}

Rational decimal_from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite value has no rational form");
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) {
    throw Error(ErrorCode::InvalidArgument, "cannot format double");
  }
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

// Correctly rounded (round-half-even) conversion; the library conversion is
// not guaranteed to round monotonically, and bracket containment relies on it.
double to_double(const Rational& q) {
  using boost::multiprecision::msb;
  const cpp_int num = boost::multiprecision::numerator(q);
  if (num == 0) {
    return 0.0;
  }
  const bool negative = num < 0;
  const cpp_int n = negative ? cpp_int(-num) : num;
  const cpp_int d = boost::multiprecision::denominator(q);

  const long shift = 64 - (static_cast<long>(msb(n)) - static_cast<long>(msb(d)));
  cpp_int a = n;
  cpp_int b = d;
  if (shift >= 0) {
    a <<= shift;
  } else {
    b <<= -shift;
  }
  cpp_int quo;
  cpp_int rem;
  boost::multiprecision::divide_qr(a, b, quo, rem);
  const bool sticky = rem != 0;

  const long bits = static_cast<long>(msb(quo)) + 1;
  const long drop = bits - 53;
  cpp_int kept = quo >> drop;
  const cpp_int dropped = quo & ((cpp_int(1) << drop) - 1);
  const cpp_int half = cpp_int(1) << (drop - 1);
  if (dropped > half || (dropped == half && (sticky || (kept & 1) != 0))) {
    kept += 1;
  }
  const double magnitude = std::ldexp(kept.convert_to<double>(), static_cast<int>(drop - shift));
  return negative ? -magnitude : magnitude;
}

}  // namespace eopt
