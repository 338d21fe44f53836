#pragma once

#include "rentbound/rational.hpp"

#include <string>
#include <string_view>

namespace rentbound {

enum class Language { German, English };

/// "English"/"en" -> English; "German"/"Deutsch"/"de"/"" -> German.
/// Anything else falls back to German and sets `supported` to false.
Language resolve_language(std::string_view requested, bool* supported = nullptr);

std::string html_escape(std::string_view text);

/// Two decimals, halves away from zero; "705,60" in German, "705.60" in English.
std::string format_amount(const Rational& value, Language lang);

/// One decimal with sign for non-zero values: "+18,0" / "-3.5" / "0.0".
std::string format_percent(const Rational& value, Language lang);

}  // namespace rentbound
