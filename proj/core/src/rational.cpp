#include "rentbound/rational.hpp"

#include <stdexcept>

namespace rentbound {

namespace mp = boost::multiprecision;

std::optional<Rational> try_parse_decimal(std::string_view text,
                                          std::string_view decimal_separators) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  mp::cpp_int numerator = 0;
  mp::cpp_int denominator = 1;
  std::size_t int_digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    numerator = numerator * 10 + (text[pos] - '0');
    ++pos;
    ++int_digits;
  }
  if (int_digits == 0) return std::nullopt;
  if (pos < text.size() && decimal_separators.find(text[pos]) != std::string_view::npos) {
    ++pos;
    std::size_t frac_digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      numerator = numerator * 10 + (text[pos] - '0');
      denominator *= 10;
      ++pos;
      ++frac_digits;
    }
    if (frac_digits == 0) return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;
  Rational value(numerator, denominator);
  return negative ? Rational(-value) : value;
}

Rational parse_decimal(std::string_view text, std::string_view decimal_separators) {
  auto value = try_parse_decimal(text, decimal_separators);
  if (!value) throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
  return *value;
}

std::string to_exact_string(const Rational& value) {
  if (mp::denominator(value) == 1) return mp::numerator(value).str();
  return mp::numerator(value).str() + "/" + mp::denominator(value).str();
}

std::optional<std::string> to_decimal_string(const Rational& value) {
  mp::cpp_int den = mp::denominator(value);
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return std::nullopt;
  return format_fixed(value, std::max(twos, fives));
}

std::string format_fixed(const Rational& value, int decimals, char decimal_separator) {
  mp::cpp_int scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const bool negative = value < 0;
  const Rational magnitude = negative ? Rational(-value) : value;
  const Rational scaled = magnitude * scale;
  // Half away from zero: floor(x + 1/2) on the magnitude.
  const Rational shifted = scaled + Rational(1, 2);
  mp::cpp_int rounded = mp::numerator(shifted) / mp::denominator(shifted);

  std::string digits = rounded.str();
  if (decimals > 0) {
    if (digits.size() <= static_cast<std::size_t>(decimals)) {
      digits.insert(0, static_cast<std::size_t>(decimals) - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), 1, decimal_separator);
  }
  if (negative && rounded != 0) digits.insert(0, 1, '-');
  return digits;
}

bool is_integer(const Rational& value) { return mp::denominator(value) == 1; }

Rational floor(const Rational& value) {
  const mp::cpp_int& num = mp::numerator(value);
  const mp::cpp_int& den = mp::denominator(value);
  mp::cpp_int q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return Rational(q);
}

Rational ceil(const Rational& value) {
  const mp::cpp_int& num = mp::numerator(value);
  const mp::cpp_int& den = mp::denominator(value);
  mp::cpp_int q = num / den;
  if (num > 0 && q * den != num) q += 1;
  return Rational(q);
}

}  // namespace rentbound
