#include "rentbound/ruleset.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rentbound {

using nlohmann::json;

std::string_view to_string(KeySource source) {
  switch (source) {
    case KeySource::size: return "size";
    case KeySource::rooms: return "rooms";
    case KeySource::year: return "year";
    case KeySource::district_category: return "district_category";
  }
  return "?";
}

const District* Ruleset::find_district(std::string_view name) const {
  for (const auto& d : districts) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const FlagQuestion* Ruleset::find_flag(std::string_view id) const {
  for (const auto& f : flags) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

const FixedCostItem* Ruleset::find_fixed_cost(std::string_view id) const {
  for (const auto& f : fixed_costs) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

Interval Ruleset::category_range() const {
  Interval out = Interval::point(districts.front().category);
  for (const auto& d : districts) out = hull(out, Interval::point(d.category));
  return out;
}

std::vector<const FlagQuestion*> Ruleset::flags_in(FlagGroup group) const {
  std::vector<const FlagQuestion*> out;
  for (const auto& f : flags) {
    if (f.group == group) out.push_back(&f);
  }
  return out;
}

Interval total_deviation_range(const Ruleset& rs) {
  Interval total = Interval::point(0);
  for (const auto& bt : rs.deviation_tables) {
    Interval values = Interval::point(bt.table.facts.front().value);
    for (const auto& f : bt.table.facts) values = hull(values, Interval::point(f.value));
    total = total + values;
  }
  for (const auto& q : rs.flags) {
    total = total + hull(Interval::point(q.yes_percent), Interval::point(q.no_percent));
  }
  return total;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw RulesetError("ruleset: " + where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

std::string string_at(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::string optional_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  return string_at(*it, where + "." + key);
}

Rational decimal_at(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a decimal string");
  auto value = try_parse_decimal(j.get_ref<const std::string&>());
  if (!value) fail(where, "'" + j.get<std::string>() + "' is not a decimal number");
  return *value;
}

Interval interval_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [lo, hi]");
  Rational lo = decimal_at(j[0], where + "[0]");
  Rational hi = decimal_at(j[1], where + "[1]");
  if (lo > hi) fail(where, "lo > hi");
  return Interval(std::move(lo), std::move(hi));
}

KeySource source_at(const json& j, const std::string& where) {
  const std::string s = string_at(j, where);
  if (s == "size") return KeySource::size;
  if (s == "rooms") return KeySource::rooms;
  if (s == "year") return KeySource::year;
  if (s == "district_category") return KeySource::district_category;
  fail(where, "unknown key source '" + s + "'");
}

struct ParsedTable {
  BoundTable bound;
  std::string role;
};

ParsedTable table_at(const json& j, const std::string& where) {
  ParsedTable out;
  BoundTable& bt = out.bound;
  bt.table.name = string_at(member(j, "name", where), where + ".name");
  out.role = string_at(member(j, "role", where), where + ".role");
  bt.label = optional_string(j, "label", where);
  bt.label_de = optional_string(j, "label_de", where);
  bt.table.value_unit = optional_string(j, "value_unit", where);

  const json& keys = member(j, "keys", where);
  if (!keys.is_array()) fail(where + ".keys", "expected an array");
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::string kw = where + ".keys[" + std::to_string(i) + "]";
    KeyColumn col;
    col.name = string_at(member(keys[i], "name", kw), kw + ".name");
    col.unit = optional_string(keys[i], "unit", kw);
    bt.table.key_columns.push_back(std::move(col));
    bt.sources.push_back(source_at(member(keys[i], "source", kw), kw + ".source"));
  }

  const json& facts = member(j, "facts", where);
  if (!facts.is_array()) fail(where + ".facts", "expected an array");
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const std::string fw = where + ".facts[" + std::to_string(i) + "]";
    const json& f = facts[i];
    if (!f.is_array() || f.size() != keys.size() + 1) {
      fail(fw, "expected " + std::to_string(keys.size()) + " key intervals followed by a value");
    }
    TableFact fact;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      fact.keys.push_back(interval_at(f[k], fw + "[" + std::to_string(k) + "]"));
    }
    fact.value = decimal_at(f[keys.size()], fw + "[" + std::to_string(keys.size()) + "]");
    bt.table.facts.push_back(std::move(fact));
  }
  return out;
}

bool latin1_representable(std::string_view utf8) {
  for (std::size_t i = 0; i < utf8.size(); ++i) {
    const auto c = static_cast<unsigned char>(utf8[i]);
    if (c < 0x80) continue;
    if (c != 0xC2 && c != 0xC3) return false;
    ++i;
  }
  return true;
}

std::vector<std::string> validate_bound(BoundTable& bt, const Ruleset::Ranges& ranges,
                                        const Interval& categories, const std::string& where) {
  for (std::size_t k = 0; k < bt.sources.size(); ++k) {
    switch (bt.sources[k]) {
      case KeySource::size: bt.table.key_columns[k].domain = ranges.size; break;
      case KeySource::rooms: bt.table.key_columns[k].domain = ranges.rooms; break;
      case KeySource::year: bt.table.key_columns[k].domain = ranges.year; break;
      case KeySource::district_category: bt.table.key_columns[k].domain = categories; break;
    }
  }
  std::vector<TableWarning> found;
  try {
    found = validate_table(bt.table);
  } catch (const TableError& e) {
    fail(where, e.what());
  }
  std::vector<std::string> out;
  for (const auto& w : found) out.push_back(w.message);
  return out;
}

const std::set<std::string> kTopLevelKeys{"meta",  "ranges",      "districts",  "tables",
                                          "flags", "imprecision", "fixed_costs", "$schema"};

}  // namespace

Ruleset parse_ruleset(std::string_view document) {
  json root;
  try {
    root = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw RulesetError(std::string("ruleset: parse error: ") + e.what());
  }
  if (!root.is_object()) fail("$", "expected an object");
  for (const auto& [key, _] : root.items()) {
    if (!kTopLevelKeys.contains(key)) fail("$", "unknown key '" + key + "'");
  }

  Ruleset::Meta meta;
  {
    const json& m = member(root, "meta", "$");
    meta.city = string_at(member(m, "city", "meta"), "meta.city");
    const json& edition = member(m, "edition", "meta");
    if (!edition.is_number_integer()) fail("meta.edition", "expected an integer");
    meta.edition = edition.get<int>();
    meta.currency = string_at(member(m, "currency", "meta"), "meta.currency");
    if (auto it = m.find("notes"); it != m.end()) {
      if (!it->is_array()) fail("meta.notes", "expected an array");
      for (std::size_t i = 0; i < it->size(); ++i) {
        meta.notes.push_back(string_at((*it)[i], "meta.notes[" + std::to_string(i) + "]"));
      }
    }
  }

  const json& r = member(root, "ranges", "$");
  Ruleset::Ranges ranges{interval_at(member(r, "size", "ranges"), "ranges.size"),
                         interval_at(member(r, "rooms", "ranges"), "ranges.rooms"),
                         interval_at(member(r, "year", "ranges"), "ranges.year")};

  std::vector<District> districts;
  {
    const json& ds = member(root, "districts", "$");
    if (!ds.is_array() || ds.empty()) fail("districts", "expected a non-empty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const std::string w = "districts[" + std::to_string(i) + "]";
      District d;
      d.name = string_at(member(ds[i], "name", w), w + ".name");
      if (d.name.empty()) fail(w + ".name", "empty district name");
      d.category = decimal_at(member(ds[i], "category", w), w + ".category");
      if (!is_integer(d.category)) fail(w + ".category", "category must be an integer");
      if (!names.insert(d.name).second) fail(w, "duplicate district '" + d.name + "'");
      districts.push_back(std::move(d));
    }
  }

  Ruleset rs{std::move(meta), std::move(ranges), std::move(districts), {}, {}, {},
             Interval::point(0), {}, {}};
  const Interval categories = rs.category_range();
  for (const auto& d : rs.districts) {
    if (!latin1_representable(d.name)) {
      rs.warnings.push_back("district '" + d.name + "' cannot be sent by Latin-1 forms");
    }
  }

  std::optional<BoundTable> base_rent;
  std::map<std::string, BoundTable> imprecision_tables;
  {
    const json& ts = member(root, "tables", "$");
    if (!ts.is_array()) fail("tables", "expected an array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string w = "tables[" + std::to_string(i) + "]";
      ParsedTable pt = table_at(ts[i], w);
      if (!names.insert(pt.bound.table.name).second) {
        fail(w, "duplicate table name '" + pt.bound.table.name + "'");
      }
      std::vector<std::string> warnings = validate_bound(pt.bound, rs.ranges, categories, w);
      if (pt.role == "base_rent") {
        if (base_rent) fail(w, "more than one base_rent table");
        if (!warnings.empty()) fail(w, "base rent table does not cover the allowed ranges: " + warnings.front());
        base_rent = std::move(pt.bound);
      } else if (pt.role == "deviation") {
        rs.warnings.insert(rs.warnings.end(), warnings.begin(), warnings.end());
        rs.deviation_tables.push_back(std::move(pt.bound));
      } else if (pt.role == "imprecision") {
        rs.warnings.insert(rs.warnings.end(), warnings.begin(), warnings.end());
        imprecision_tables.emplace(pt.bound.table.name, std::move(pt.bound));
      } else {
        fail(w + ".role", "unknown table role '" + pt.role + "'");
      }
    }
  }
  if (!base_rent) fail("tables", "missing base_rent table");
  rs.base_rent = std::move(*base_rent);

  {
    const json& fl = member(root, "flags", "$");
    std::set<std::string> ids;
    for (const auto& [group_name, group] : {std::pair{"house", FlagGroup::house},
                                            std::pair{"flat", FlagGroup::flat}}) {
      const json& qs = member(fl, group_name, "flags");
      if (!qs.is_array()) fail(std::string("flags.") + group_name, "expected an array");
      for (std::size_t i = 0; i < qs.size(); ++i) {
        const std::string w = std::string("flags.") + group_name + "[" + std::to_string(i) + "]";
        FlagQuestion q;
        q.id = string_at(member(qs[i], "id", w), w + ".id");
        if (q.id.empty()) fail(w + ".id", "empty question id");
        q.group = group;
        q.label = optional_string(qs[i], "label", w);
        q.label_de = optional_string(qs[i], "label_de", w);
        q.yes_percent = decimal_at(member(qs[i], "yes", w), w + ".yes");
        q.no_percent = decimal_at(member(qs[i], "no", w), w + ".no");
        if (!ids.insert(q.id).second) fail(w, "duplicate question id '" + q.id + "'");
        rs.flags.push_back(std::move(q));
      }
    }
  }

  {
    const json& im = member(root, "imprecision", "$");
    if (auto c = im.find("constant"); c != im.end()) {
      rs.imprecision = interval_at(*c, "imprecision.constant");
    } else if (auto t = im.find("table"); t != im.end()) {
      const std::string name = string_at(*t, "imprecision.table");
      auto it = imprecision_tables.find(name);
      if (it == imprecision_tables.end()) {
        fail("imprecision.table", "no table '" + name + "' with role imprecision");
      }
      rs.imprecision = it->second;
    } else {
      fail("imprecision", "expected 'constant' or 'table'");
    }
  }

  {
    const json& fc = member(root, "fixed_costs", "$");
    if (!fc.is_array()) fail("fixed_costs", "expected an array");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < fc.size(); ++i) {
      const std::string w = "fixed_costs[" + std::to_string(i) + "]";
      FixedCostItem item;
      item.id = string_at(member(fc[i], "id", w), w + ".id");
      if (item.id.empty()) fail(w + ".id", "empty item id");
      item.label = optional_string(fc[i], "label", w);
      item.label_de = optional_string(fc[i], "label_de", w);
      item.min = decimal_at(member(fc[i], "min", w), w + ".min");
      item.max = decimal_at(member(fc[i], "max", w), w + ".max");
      if (item.min < 0 || item.min > item.max) fail(w, "need 0 <= min <= max");
      if (!ids.insert(item.id).second) fail(w, "duplicate fixed-cost id '" + item.id + "'");
      if (rs.find_flag(item.id)) fail(w, "id '" + item.id + "' clashes with a question id");
      rs.fixed_costs.push_back(std::move(item));
    }
  }

  const Interval total = total_deviation_range(rs);
  if (total.lo() < -60 || total.hi() > 60) {
    rs.warnings.push_back("total deviation can reach " + format_fixed(total.lo(), 1) + "% .. " +
                          format_fixed(total.hi(), 1) + "%, beyond +/-60%");
  }
  return rs;
}

Ruleset load_ruleset(std::istream& source) {
  std::ostringstream buffer;
  buffer << source.rdbuf();
  if (source.bad()) throw RulesetError("ruleset: read error");
  return parse_ruleset(buffer.str());
}

Ruleset load_ruleset_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RulesetError("ruleset: cannot open '" + path.string() + "'");
  return load_ruleset(in);
}

}  // namespace rentbound
