#include "rentbound/form_codec.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace rentbound {

std::string_view to_string(FormErrc code) {
  switch (code) {
    case FormErrc::malformed_escape: return "malformed escape";
    case FormErrc::integer_required: return "integer required";
    case FormErrc::decimal_required: return "decimal number required";
    case FormErrc::wrong_interval: return "wrong interval";
    case FormErrc::out_of_range: return "value out of range";
    case FormErrc::unknown_district: return "unknown district";
    case FormErrc::invalid_choice: return "invalid choice";
  }
  return "?";
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void append_latin1_as_utf8(std::string& out, unsigned char byte) {
  if (byte < 0x80) {
    out.push_back(static_cast<char>(byte));
  } else {
    out.push_back(static_cast<char>(0xC0 | (byte >> 6)));
    out.push_back(static_cast<char>(0x80 | (byte & 0x3F)));
  }
}

std::string percent_decode(std::string_view raw, std::string_view field) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '+') {
      out.push_back(' ');
    } else if (c == '%') {
      const int hi = i + 1 < raw.size() ? hex_value(raw[i + 1]) : -1;
      const int lo = i + 2 < raw.size() ? hex_value(raw[i + 2]) : -1;
      if (hi < 0 || lo < 0) {
        throw FormError(FormErrc::malformed_escape, std::string(field),
                        "malformed percent escape in field '" + std::string(field) + "'");
      }
      append_latin1_as_utf8(out, static_cast<unsigned char>(hi * 16 + lo));
      i += 2;
    } else {
      append_latin1_as_utf8(out, static_cast<unsigned char>(c));
    }
  }
  return out;
}

}  // namespace

FieldMap decode_body(std::string_view body) {
  FieldMap fields;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t end = body.find('&', start);
    if (end == std::string_view::npos) end = body.size();
    std::string_view pair = body.substr(start, end - start);
    // Browsers terminate bodies with CR LF now and then.
    while (!pair.empty() && (pair.back() == '\r' || pair.back() == '\n')) pair.remove_suffix(1);
    while (!pair.empty() && (pair.front() == '\r' || pair.front() == '\n')) pair.remove_prefix(1);
    if (!pair.empty()) {
      const std::size_t eq = pair.find('=');
      std::string_view raw_name = pair.substr(0, eq);
      std::string_view raw_value = eq == std::string_view::npos ? std::string_view{} : pair.substr(eq + 1);
      std::string name = percent_decode(raw_name, raw_name);
      std::string value = percent_decode(raw_value, name);
      fields.emplace_back(std::move(name), std::move(value));
    }
    start = end + 1;
  }
  return fields;
}

std::string form_escape(std::string_view utf8) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  auto emit = [&](unsigned char b) {
    if ((b >= 'A' && b <= 'Z') || (b >= 'a' && b <= 'z') || (b >= '0' && b <= '9') || b == '-' ||
        b == '_' || b == '.' || b == '*') {
      out.push_back(static_cast<char>(b));
    } else if (b == ' ') {
      out.push_back('+');
    } else {
      out.push_back('%');
      out.push_back(kHex[b >> 4]);
      out.push_back(kHex[b & 0xF]);
    }
  };
  for (std::size_t i = 0; i < utf8.size(); ++i) {
    const auto c = static_cast<unsigned char>(utf8[i]);
    if (c < 0x80) {
      emit(c);
      continue;
    }
    // Decode one UTF-8 sequence; stray bytes pass through as Latin-1.
    int extra = c >= 0xF0 ? 3 : c >= 0xE0 ? 2 : c >= 0xC0 ? 1 : 0;
    if (extra == 0 || i + static_cast<std::size_t>(extra) >= utf8.size()) {
      emit(c);
      continue;
    }
    unsigned cp = c & (0x3F >> extra);
    bool valid = true;
    for (int k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(utf8[i + k]);
      if ((cc & 0xC0) != 0x80) {
        valid = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!valid) {
      emit(c);
      continue;
    }
    i += static_cast<std::size_t>(extra);
    emit(cp <= 0xFF ? static_cast<unsigned char>(cp) : static_cast<unsigned char>('?'));
  }
  return out;
}

std::string encode_fields(const FieldMap& fields) {
  std::string out;
  for (const auto& [name, value] : fields) {
    if (!out.empty()) out.push_back('&');
    out += form_escape(name);
    out.push_back('=');
    out += form_escape(value);
  }
  return out;
}

FieldSchema make_schema(const Ruleset& rs) {
  FieldSchema schema;
  schema.push_back({"Language", FieldKind::language, FieldSection::meta, std::nullopt, "", "language",
                    "Language", "Sprache"});
  auto pair = [&](const std::string& stem, const char* target, const Interval& bounds,
                  const char* label, const char* label_de) {
    schema.push_back({stem + "_min", FieldKind::integer_min, FieldSection::basic, bounds,
                      stem + "_max", target, label, label_de});
    schema.push_back({stem + "_max", FieldKind::integer_max, FieldSection::basic, bounds,
                      stem + "_min", target, label, label_de});
  };
  pair("M2", "size", rs.ranges.size, "Size of the flat (square meters)", "Wohnfläche (qm)");
  pair("ZI", "rooms", rs.ranges.rooms, "Number of rooms", "Anzahl der Zimmer");
  pair("BJ", "year", rs.ranges.year, "Year the house was built", "Baujahr des Hauses");
  schema.push_back({"District", FieldKind::district, FieldSection::district, std::nullopt, "",
                    "district", "District", "Stadtbezirk"});
  for (const auto& q : rs.flags) {
    schema.push_back({q.id, FieldKind::tristate,
                      q.group == FlagGroup::house ? FieldSection::house : FieldSection::flat,
                      std::nullopt, "", q.id, q.label.empty() ? q.id : q.label, q.label_de});
  }
  for (const auto& item : rs.fixed_costs) {
    const Interval bounds(item.min, item.max);
    const std::string stem = "NK_" + item.id;
    const std::string label = item.label.empty() ? item.id : item.label;
    schema.push_back({stem + "_min", FieldKind::decimal_min, FieldSection::fixed_costs, bounds,
                      stem + "_max", item.id, label, item.label_de});
    schema.push_back({stem + "_max", FieldKind::decimal_max, FieldSection::fixed_costs, bounds,
                      stem + "_min", item.id, label, item.label_de});
  }
  return schema;
}

const FieldSpec* find_field(const FieldSchema& schema, std::string_view name) {
  auto it = std::find_if(schema.begin(), schema.end(), [&](const FieldSpec& f) { return f.name == name; });
  return it == schema.end() ? nullptr : &*it;
}

namespace {

bool is_blank(const std::string* value) { return !value || value->empty() || *value == "?"; }

Rational parse_number(const FieldSpec& spec, const std::string& raw) {
  const bool integral = spec.kind == FieldKind::integer_min || spec.kind == FieldKind::integer_max;
  std::optional<Rational> value;
  if (integral) {
    const bool digits_only =
        !raw.empty() && raw.size() <= 18 &&
        std::all_of(raw.begin(), raw.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (digits_only) value = Rational(std::stoll(raw));
  } else if (raw.size() <= 24 && raw.front() != '-' && raw.front() != '+') {
    value = try_parse_decimal(raw, ".,");
  }
  if (!value) {
    const FormErrc code = integral ? FormErrc::integer_required : FormErrc::decimal_required;
    throw FormError(code, spec.name,
                    std::string(to_string(code)) + ": field '" + spec.name + "' has '" + raw + "'");
  }
  if (spec.bounds && !spec.bounds->contains(*value)) {
    throw FormError(FormErrc::out_of_range, spec.name,
                    "value out of range: field '" + spec.name + "' has '" + raw + "', allowed " +
                        to_string(*spec.bounds));
  }
  return *value;
}

bool ieq(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

BoundForm bind_fields(const FieldMap& fields, const FieldSchema& schema, const Ruleset& rs) {
  BoundForm out;
  std::map<std::string, std::string> last;
  for (const auto& [name, value] : fields) {
    auto [it, inserted] = last.insert_or_assign(name, value);
    if (!inserted) out.warnings.push_back("field '" + name + "' repeated; last value used");
    if (!find_field(schema, name)) {
      if (inserted) out.warnings.push_back("unknown field '" + name + "' ignored");
    }
  }
  auto value_of = [&](const std::string& name) -> const std::string* {
    auto it = last.find(name);
    return it == last.end() ? nullptr : &it->second;
  };

  for (const auto& q : rs.flags) {
    (q.group == FlagGroup::house ? out.answers.house_flags : out.answers.flat_flags)[q.id] =
        TriState::Unknown;
  }

  for (const auto& spec : schema) {
    const std::string* raw = value_of(spec.name);
    switch (spec.kind) {
      case FieldKind::language:
        if (raw) out.language = *raw;
        break;
      case FieldKind::integer_min:
      case FieldKind::decimal_min: {
        const std::string* raw_max = value_of(spec.partner);
        const FieldSpec* max_spec = find_field(schema, spec.partner);
        std::optional<Rational> lo;
        std::optional<Rational> hi;
        if (!is_blank(raw)) lo = parse_number(spec, *raw);
        if (!is_blank(raw_max)) hi = parse_number(*max_spec, *raw_max);
        if (!lo && !hi) break;
        if (!lo) lo = spec.bounds->lo();
        if (!hi) hi = spec.bounds->hi();
        if (*lo > *hi) {
          throw FormError(FormErrc::wrong_interval, spec.name,
                          "wrong interval: '" + spec.name + "' is greater than '" + spec.partner + "'");
        }
        Interval iv(*lo, *hi);
        if (spec.target == "size") {
          out.answers.size = iv;
        } else if (spec.target == "rooms") {
          out.answers.rooms = iv;
        } else if (spec.target == "year") {
          out.answers.year = iv;
        } else {
          out.answers.fixed_costs.insert_or_assign(spec.target, iv);
        }
        break;
      }
      case FieldKind::integer_max:
      case FieldKind::decimal_max:
        break;  // bound together with its _min partner
      case FieldKind::district:
        if (is_blank(raw)) break;
        if (!rs.find_district(*raw)) {
          throw FormError(FormErrc::unknown_district, spec.name, "unknown district '" + *raw + "'");
        }
        out.answers.district = *raw;
        break;
      case FieldKind::tristate: {
        if (is_blank(raw)) break;
        TriState state;
        if (ieq(*raw, "yes") || ieq(*raw, "ja")) {
          state = TriState::Yes;
        } else if (ieq(*raw, "no") || ieq(*raw, "nein")) {
          state = TriState::No;
        } else {
          throw FormError(FormErrc::invalid_choice, spec.name,
                          "invalid choice: field '" + spec.name + "' has '" + *raw + "'");
        }
        const FlagQuestion* q = rs.find_flag(spec.target);
        (q && q->group == FlagGroup::house ? out.answers.house_flags
                                           : out.answers.flat_flags)[spec.target] = state;
        break;
      }
    }
  }
  return out;
}

namespace {

std::string number_text(const Rational& value, bool integral) {
  if (integral) return to_exact_string(value);
  return to_decimal_string(value).value_or(format_fixed(value, 2));
}

}  // namespace

std::string encode_answers(const Answers& answers, const FieldSchema& schema) {
  FieldMap fields;
  for (const auto& spec : schema) {
    const bool is_min = spec.kind == FieldKind::integer_min || spec.kind == FieldKind::decimal_min;
    const bool is_max = spec.kind == FieldKind::integer_max || spec.kind == FieldKind::decimal_max;
    if (is_min || is_max) {
      const std::optional<Interval>* slot = nullptr;
      std::optional<Interval> cost;
      if (spec.target == "size") {
        slot = &answers.size;
      } else if (spec.target == "rooms") {
        slot = &answers.rooms;
      } else if (spec.target == "year") {
        slot = &answers.year;
      } else if (auto it = answers.fixed_costs.find(spec.target); it != answers.fixed_costs.end()) {
        cost = it->second;
        slot = &cost;
      }
      if (!slot || !*slot) continue;
      const bool integral = spec.kind == FieldKind::integer_min || spec.kind == FieldKind::integer_max;
      fields.emplace_back(spec.name, number_text(is_min ? (*slot)->lo() : (*slot)->hi(), integral));
    } else if (spec.kind == FieldKind::district) {
      if (answers.district) fields.emplace_back(spec.name, *answers.district);
    } else if (spec.kind == FieldKind::tristate) {
      const TriState state = answers.flag(spec.target);
      if (state == TriState::Yes) fields.emplace_back(spec.name, "Yes");
      if (state == TriState::No) fields.emplace_back(spec.name, "No");
    }
  }
  return encode_fields(fields);
}

}  // namespace rentbound
