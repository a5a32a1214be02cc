#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rcalc {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (tokens, expressions, files).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw Error("zero denominator");
  return Rational(Integer(num), Integer(den));
}

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

/// Parses "3", "-1/2", "+0.25", "1.5". Decimals are read exactly.
/// Base-10 digits to an integer. The string constructor of cpp_int reads a
/// leading zero as an octal prefix, so zeros are stripped first.
inline Integer decimal_integer(const std::string& digits) {
  std::size_t nz = digits.find_first_not_of('0');
  return nz == std::string::npos ? Integer(0) : Integer(digits.substr(nz));
}

inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw ParseError("not a rational number: '" + std::string(text) + "'"); };
  std::string s(text);
  if (s.empty()) fail();
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  if (i >= s.size()) fail();
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t k = from; k < to; ++k)
      if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
    return true;
  };
  Rational value;
  if (auto slash = s.find('/', i); slash != std::string::npos) {
    if (!digits(i, slash) || !digits(slash + 1, s.size())) fail();
    Integer n = decimal_integer(s.substr(i, slash - i));
    Integer d = decimal_integer(s.substr(slash + 1));
    if (d == 0) fail();
    value = Rational(n, d);
  } else if (auto dot = s.find('.', i); dot != std::string::npos) {
    bool int_ok = dot == i || digits(i, dot);
    bool frac_ok = dot + 1 == s.size() || digits(dot + 1, s.size());
    if (!int_ok || !frac_ok || (dot == i && dot + 1 == s.size())) fail();
    std::string whole = dot == i ? "0" : s.substr(i, dot - i);
    std::string frac = s.substr(dot + 1);
    Integer scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    Integer n = decimal_integer(whole) * scale + decimal_integer(frac);
    value = Rational(n, scale);
  } else {
    if (!digits(i, s.size())) fail();
    value = Rational(decimal_integer(s.substr(i)));
  }
  return negative ? Rational(-value) : value;
}

/// "p/q" or "p".
inline std::string format_fraction(const Rational& q) {
  if (is_integer(q)) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

/// Exact decimal when the denominator is 2^a 5^b, otherwise "p/q".
inline std::string format_exact(const Rational& q) {
  Integer d = den(q);
  if (d == 1) return num(q).str();
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return format_fraction(q);
  int places = twos > fives ? twos : fives;
  Integer scale = 1;
  for (int k = 0; k < places; ++k) scale *= 10;
  Integer n = num(q) * scale / den(q);
  bool negative = n < 0;
  if (negative) n = -n;
  std::string digits = n.str();
  while (static_cast<int>(digits.size()) <= places) digits.insert(digits.begin(), '0');
  digits.insert(digits.end() - places, '.');
  return negative ? "-" + digits : digits;
}

/// Exponent text inside a power: "2", "(1/2)", "(-1)".
inline std::string format_power(const Rational& q) {
  if (is_integer(q) && q > 0) return num(q).str();
  return "(" + format_fraction(q) + ")";
}

}  // namespace rcalc
