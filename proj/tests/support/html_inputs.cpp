#include "html_inputs.hpp"

#include <cctype>

namespace rentbound::testing {

namespace {

std::string unescape(std::string s) {
  const std::pair<const char*, const char*> entities[] = {
      {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&#39;", "'"}, {"&amp;", "&"}};
  for (const auto& [from, to] : entities) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + 1)) {
      s.replace(pos, std::string(from).size(), to);
    }
  }
  return s;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::map<std::string, std::string> parse_attributes(const std::string& tag) {
  std::map<std::string, std::string> out;
  std::size_t i = 0;
  while (i < tag.size() && !std::isspace(static_cast<unsigned char>(tag[i]))) ++i;  // tag name
  while (i < tag.size()) {
    while (i < tag.size() && (std::isspace(static_cast<unsigned char>(tag[i])) || tag[i] == '/')) ++i;
    const std::size_t start = i;
    while (i < tag.size() && tag[i] != '=' && !std::isspace(static_cast<unsigned char>(tag[i])) && tag[i] != '/') ++i;
    if (start == i) {
      ++i;
      continue;
    }
    std::string name = lower(tag.substr(start, i - start));
    std::string value;
    if (i < tag.size() && tag[i] == '=') {
      ++i;
      if (i < tag.size() && (tag[i] == '"' || tag[i] == '\'')) {
        const char q = tag[i++];
        const std::size_t end = tag.find(q, i);
        value = tag.substr(i, end - i);
        i = end == std::string::npos ? tag.size() : end + 1;
      } else {
        const std::size_t vstart = i;
        while (i < tag.size() && !std::isspace(static_cast<unsigned char>(tag[i]))) ++i;
        value = tag.substr(vstart, i - vstart);
      }
    }
    out[name] = unescape(value);
  }
  return out;
}

}  // namespace

std::vector<HtmlInput> extract_inputs(const std::string& html) {
  std::vector<HtmlInput> out;
  const std::string l = lower(html);
  std::size_t pos = 0;
  for (;;) {
    const std::size_t input = l.find("<input", pos);
    const std::size_t select = l.find("<select", pos);
    if (input == std::string::npos && select == std::string::npos) break;
    const std::size_t at = std::min(input, select);
    const std::size_t close = html.find('>', at);
    if (close == std::string::npos) break;
    HtmlInput in;
    in.tag = at == input ? "input" : "select";
    in.attributes = parse_attributes(html.substr(at + 1, close - at - 1));
    pos = close + 1;
    if (in.tag == "select") {
      const std::size_t end = l.find("</select", pos);
      const std::string body = html.substr(pos, end - pos);
      const std::string lbody = lower(body);
      std::optional<std::string> first;
      for (std::size_t o = lbody.find("<option"); o != std::string::npos; o = lbody.find("<option", o + 1)) {
        const std::size_t oc = body.find('>', o);
        auto attrs = parse_attributes(body.substr(o + 1, oc - o - 1));
        std::string value;
        if (attrs.contains("value")) {
          value = attrs["value"];
        } else {
          const std::size_t text_end = body.find('<', oc + 1);
          value = unescape(body.substr(oc + 1, text_end - oc - 1));
        }
        if (!first) first = value;
        if (attrs.contains("selected")) in.selected = value;
      }
      if (!in.selected) in.selected = first;
      pos = end == std::string::npos ? l.size() : end;
    }
    out.push_back(std::move(in));
  }
  return out;
}

FieldMap submitted_fields(const std::vector<HtmlInput>& inputs) {
  FieldMap out;
  for (const auto& in : inputs) {
    const std::string name = in.attr("name");
    if (name.empty()) continue;
    if (in.tag == "select") {
      if (in.selected) out.emplace_back(name, *in.selected);
      continue;
    }
    const std::string type = lower(in.attr("type"));
    if (type == "submit") continue;
    if ((type == "radio" || type == "checkbox") && !in.attributes.contains("checked")) continue;
    out.emplace_back(name, in.attr("value"));
  }
  return out;
}

}  // namespace rentbound::testing
