#include "wpart/numfmt.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace wpart {

namespace {

std::string finite_or_label(double x) {
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

std::string shortest(double x) {
  if (!std::isfinite(x)) return finite_or_label(x);
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string significant(double x, int digits) {
  if (!std::isfinite(x)) return finite_or_label(x);
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, digits);
  return std::string(buf.data(), res.ptr);
}

std::string exp_of_log(double log_value, int digits) {
  if (std::isnan(log_value)) return "nan";
  if (log_value == -std::numeric_limits<double>::infinity()) return "0";
  const double direct = std::exp(log_value);
  if (std::isfinite(direct) && direct > 0.0) return significant(direct, digits);
  const double log10_value = log_value / std::numbers::ln10;
  double exponent = std::floor(log10_value);
  double mantissa = std::pow(10.0, log10_value - exponent);
  if (mantissa >= 10.0) {
    mantissa /= 10.0;
    exponent += 1.0;
  }
  const std::string sign = exponent < 0 ? "-" : "+";
  return significant(mantissa, digits) + "e" + sign + std::to_string(static_cast<long long>(std::fabs(exponent)));
}

}  // namespace wpart
