#include "tropjac/rational.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace tropjac {

namespace {

Rational pow10(long exponent) {
  BigInt p = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
  return exponent >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  // A leading zero would make cpp_int read the digits as octal.
  const auto first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? BigInt(0) : BigInt(std::string(digits.substr(first)));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty number");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(s.substr(0, slash), text);
    BigInt den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    value = Rational(num, den);
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      BigInt magnitude = parse_integer(exp_text, text);
      if (magnitude > 4000) throw std::invalid_argument("exponent out of range: '" + std::string(text) + "'");
      exponent = magnitude.convert_to<long>();
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view int_part = s.substr(0, dot);
      std::string_view frac_part = s.substr(dot + 1);
      if (int_part.empty() && frac_part.empty())
        throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
      digits = std::string(int_part) + std::string(frac_part);
      exponent -= static_cast<long>(frac_part.size());
    } else {
      digits = std::string(s);
    }
    value = Rational(parse_integer(digits, text)) * pow10(exponent);
  }
  return negative ? Rational(-value) : value;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite length");
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::invalid_argument("cannot format number");
  return parse_rational(std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data())));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_decimal(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.15g", value);
  return buf.data();
}

}  // namespace tropjac
