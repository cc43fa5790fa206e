#include "wpart/bignum.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "wpart/errors.hpp"

namespace wpart {

double log_of(const BigInt& x) {
  if (x <= 0) throw DomainError("log_of: argument must be positive");
  const auto bits = static_cast<long>(boost::multiprecision::msb(x)) + 1;
  if (bits <= 62) return std::log(static_cast<double>(x.convert_to<long long>()));
  const long shift = bits - 62;
  const BigInt top = x >> shift;
  return std::log(static_cast<double>(top.convert_to<long long>())) + static_cast<double>(shift) * std::numbers::ln2;
}

double log_of(const Rational& x) {
  if (x <= 0) throw DomainError("log_of: argument must be positive");
  return log_of(BigInt(boost::multiprecision::numerator(x))) - log_of(BigInt(boost::multiprecision::denominator(x)));
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("exact_rational: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp2 = 0;
  const double mant = std::frexp(x, &exp2);  // x = mant * 2^exp2, 0.5 <= |mant| < 1
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp2 -= 53;
  BigInt num(scaled);
  if (exp2 >= 0) return Rational(num << exp2);
  return Rational(num, BigInt(1) << -exp2);
}

namespace {

BigInt parse_digits(std::string_view digits, std::string_view original) {
  if (digits.empty()) throw ConfigError("malformed number: '" + std::string(original) + "'");
  BigInt out = 0;
  for (const char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw ConfigError("malformed number: '" + std::string(original) + "'");
    out = out * 10 + (c - '0');
  }
  return out;
}

BigInt pow10(long e) {
  BigInt p = 1;
  for (long i = 0; i < e; ++i) p *= 10;
  return p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ConfigError("empty number");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(original) + "'");
    return num / den;
  }

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    const BigInt mag = parse_digits(exp_text, original);
    if (mag > 4000) throw ConfigError("exponent out of range in '" + std::string(original) + "'");
    exponent = mag.convert_to<long>() * (exp_negative ? -1 : 1);
    text = text.substr(0, e);
  }
  std::string digits(text);
  if (const auto dot = digits.find('.'); dot != std::string::npos) {
    exponent -= static_cast<long>(digits.size() - dot - 1);
    digits.erase(dot, 1);
  }
  Rational value(parse_digits(digits, original));
  if (exponent >= 0)
    value *= Rational(pow10(exponent));
  else
    value /= Rational(pow10(-exponent));
  return negative ? Rational(-value) : value;
}

bool is_integer(const Rational& x) { return boost::multiprecision::denominator(x) == 1; }

std::string to_string(const Rational& x) {
  if (is_integer(x)) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

std::string to_string(const BigInt& x) { return x.str(); }

}  // namespace wpart
