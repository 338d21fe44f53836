#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace rentbound {

/// Exact rational number. Every endpoint in the constraint store, every table
/// value and every currency amount is one of these; nothing is ever rounded
/// until it is rendered.
using Rational = boost::multiprecision::cpp_rational;

/// Parses a plain decimal literal such as "-3.5", "160" or "0.01" exactly.
/// `decimal_separators` lists the characters accepted as the decimal point.
/// Exponents, hex, whitespace and empty fraction/integer parts are rejected.
/// Throws std::invalid_argument on malformed input.
Rational parse_decimal(std::string_view text, std::string_view decimal_separators = ".");

/// Non-throwing variant of parse_decimal.
std::optional<Rational> try_parse_decimal(std::string_view text,
                                          std::string_view decimal_separators = ".");

/// "p" for integers, "p/q" otherwise; lossless.
std::string to_exact_string(const Rational& value);

/// Exact decimal expansion if the value has a terminating one ("-3.5").
std::optional<std::string> to_decimal_string(const Rational& value);

/// Rounds to `decimals` places, halves away from zero, and prints with the
/// given decimal separator. No thousands grouping.
std::string format_fixed(const Rational& value, int decimals, char decimal_separator = '.');

bool is_integer(const Rational& value);
Rational floor(const Rational& value);
Rational ceil(const Rational& value);

}  // namespace rentbound
