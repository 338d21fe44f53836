#include "rentbound/html.hpp"

#include <algorithm>
#include <cctype>

namespace rentbound {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Language resolve_language(std::string_view requested, bool* supported) {
  const std::string l = lower(requested);
  if (supported) *supported = true;
  if (l == "english" || l == "en") return Language::English;
  if (l.empty() || l == "german" || l == "deutsch" || l == "de") return Language::German;
  if (supported) *supported = false;
  return Language::German;
}

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string format_amount(const Rational& value, Language lang) {
  return format_fixed(value, 2, lang == Language::German ? ',' : '.');
}

std::string format_percent(const Rational& value, Language lang) {
  std::string text = format_fixed(value, 1, lang == Language::German ? ',' : '.');
  if (value > 0) text.insert(0, 1, '+');
  return text;
}

}  // namespace rentbound
