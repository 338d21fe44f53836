#include "rentbound/clone_form.hpp"

#include <algorithm>
#include <set>

namespace rentbound {

namespace {

struct SectionName {
  const char* name;
  FieldSection section;
};

constexpr SectionName kSections[] = {
    {"basic", FieldSection::basic},           {"district", FieldSection::district},
    {"house", FieldSection::house},           {"flat", FieldSection::flat},
    {"fixed_costs", FieldSection::fixed_costs}, {"meta", FieldSection::meta},
};

std::string number_attr(const Rational& value) {
  return to_decimal_string(value).value_or(format_fixed(value, 2));
}

const std::string& label_for(const FieldSpec& spec, Language lang) {
  return lang == Language::German && !spec.label_de.empty() ? spec.label_de : spec.label;
}

}  // namespace

std::vector<std::string> expand_subset(const FieldSchema& schema, std::span<const std::string> subset) {
  std::set<std::string> wanted;
  for (const auto& name : subset) {
    if (name == "all") {
      for (const auto& f : schema) wanted.insert(f.name);
      continue;
    }
    const auto* section = std::find_if(std::begin(kSections), std::end(kSections),
                                       [&](const SectionName& s) { return name == s.name; });
    if (section != std::end(kSections)) {
      for (const auto& f : schema) {
        if (f.section == section->section) wanted.insert(f.name);
      }
      continue;
    }
    const FieldSpec* spec = find_field(schema, name);
    if (!spec) throw CloneError("unknown field '" + name + "'");
    wanted.insert(spec->name);
    if (!spec->partner.empty()) wanted.insert(spec->partner);
  }
  std::vector<std::string> ordered;
  for (const auto& f : schema) {
    if (wanted.contains(f.name)) ordered.push_back(f.name);
  }
  return ordered;
}

std::string clone_form(const Ruleset& rs, std::span<const std::string> subset, const FieldMap& fixed,
                       const CloneOptions& options) {
  const FieldSchema schema = make_schema(rs);
  std::set<std::string> hidden;
  for (const auto& [name, _] : fixed) {
    const FieldSpec* spec = find_field(schema, name);
    if (!spec) throw CloneError("unknown field '" + name + "'");
    hidden.insert(name);
  }
  // Fails on values the server would reject.
  (void)bind_fields(fixed, schema, rs);

  const Language lang = options.language;
  const bool de = lang == Language::German;
  std::string html;
  html += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" +
          html_escape(options.title) + "</title>\n</head>\n<body>\n";
  html += "<form method=\"POST\" action=\"" + html_escape(options.action) +
          "\" accept-charset=\"ISO-8859-1\">\n";
  for (const auto& [name, value] : fixed) {
    html += "<input type=\"hidden\" name=\"" + html_escape(name) + "\" value=\"" + html_escape(value) +
            "\">\n";
  }

  const std::vector<std::string> visible = expand_subset(schema, subset);
  for (const auto& name : visible) {
    if (hidden.contains(name)) continue;
    const FieldSpec& spec = *find_field(schema, name);
    const std::string label = html_escape(label_for(spec, lang));
    switch (spec.kind) {
      case FieldKind::integer_min:
      case FieldKind::decimal_min: {
        const bool integral = spec.kind == FieldKind::integer_min;
        const std::string size = integral ? std::to_string(to_exact_string(spec.bounds->hi()).size()) : "8";
        html += "<p>" + label + "<br>\n" + (de ? "mindestens " : "at least ") +
                "<input type=\"text\" name=\"" + html_escape(spec.name) + "\" size=\"" + size +
                "\" maxlength=\"" + size + "\" value=\"" +
                (integral ? number_attr(spec.bounds->lo()) : std::string()) + "\">\n";
        break;
      }
      case FieldKind::integer_max:
      case FieldKind::decimal_max: {
        const bool integral = spec.kind == FieldKind::integer_max;
        const std::string size = integral ? std::to_string(to_exact_string(spec.bounds->hi()).size()) : "8";
        html += std::string(de ? "höchstens " : "not more than ") + "<input type=\"text\" name=\"" +
                html_escape(spec.name) + "\" size=\"" + size + "\" maxlength=\"" + size + "\" value=\"" +
                (integral ? number_attr(spec.bounds->hi()) : std::string()) + "\"></p>\n";
        break;
      }
      case FieldKind::district:
        html += "<p>" + label + "<br>\n<select name=\"" + html_escape(spec.name) + "\">\n";
        html += std::string("<option value=\"?\" selected>") + (de ? "weiß nicht" : "don't know") +
                "</option>\n";
        for (const auto& d : rs.districts) {
          html += "<option>" + html_escape(d.name) + "</option>\n";
        }
        html += "</select></p>\n";
        break;
      case FieldKind::tristate: {
        const std::string n = html_escape(spec.name);
        html += "<p>" + label + "<br>\n";
        html += "<input type=\"radio\" name=\"" + n + "\" value=\"Yes\">" + (de ? "Ja" : "Yes") + "\n";
        html += "<input type=\"radio\" name=\"" + n + "\" value=\"No\">" + (de ? "Nein" : "No") + "\n";
        html += "<input type=\"radio\" name=\"" + n + "\" value=\"?\" checked>" +
                (de ? "weiß nicht" : "don't know") + "</p>\n";
        break;
      }
      case FieldKind::language:
        html += "<p>" + label + "<br>\n<select name=\"Language\">\n";
        html += std::string("<option value=\"German\"") + (de ? " selected" : "") + ">Deutsch</option>\n";
        html += std::string("<option value=\"English\"") + (de ? "" : " selected") + ">English</option>\n";
        html += "</select></p>\n";
        break;
    }
  }
  html += "<input type=\"submit\" value=\"Submit\">\n</form>\n</body>\n</html>\n";
  return html;
}

}  // namespace rentbound
