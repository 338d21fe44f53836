#include "rentbound/log_analyzer.hpp"

#include <json.hpp>

#include <algorithm>
#include <arpa/inet.h>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <sstream>

namespace rentbound {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool has(const std::string& haystack, std::string_view needle) {
  return haystack.find(needle) != std::string::npos;
}

// "win" at a word start, so "Darwin" does not count.
bool has_word_prefix(const std::string& haystack, std::string_view prefix) {
  for (std::size_t pos = haystack.find(prefix); pos != std::string::npos; pos = haystack.find(prefix, pos + 1)) {
    if (pos == 0 || !std::isalpha(static_cast<unsigned char>(haystack[pos - 1]))) return true;
  }
  return false;
}

constexpr std::array<std::string_view, 5> outcome_names{"ok", "wrong_request", "timeout_header", "timeout_body",
                                                         "syntax_error"};
constexpr std::array<std::string_view, 6> group_names{"Uni", "Com", "Pro", "Other", "anonymous", "self_test"};
constexpr std::array<std::string_view, 4> family_names{"Mozilla", "Compatible", "Mosaic", "Other"};
constexpr std::array<std::string_view, 11> os_names{"Win95", "Win16",     "WinNT", "Windows", "SunOS", "HP-UX",
                                                    "Linux", "Irix",      "Macintosh", "OS/2", "Other"};
constexpr std::array<std::string_view, 12> month_names{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                       "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
constexpr std::array<std::string_view, 7> weekday_names{"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
constexpr std::array<std::string_view, 24> hour_names{"00", "01", "02", "03", "04", "05", "06", "07",
                                                      "08", "09", "10", "11", "12", "13", "14", "15",
                                                      "16", "17", "18", "19", "20", "21", "22", "23"};

enum Dim : std::size_t { d_outcome, d_origin, d_tld, d_family, d_os, d_language, d_month, d_weekday, d_hour };

constexpr std::array<std::string_view, 9> dimension_names{"outcome",  "origin",   "tld",     "agent_family", "agent_os",
                                                          "language", "month",    "weekday", "hour"};

// Fixed bucket order; empty span for open dimensions.
std::vector<std::string_view> fixed_buckets(std::size_t dim) {
  switch (dim) {
    case d_outcome: return {outcome_names.begin(), outcome_names.end()};
    case d_origin: return {group_names.begin(), group_names.end()};
    case d_family: return {family_names.begin(), family_names.end()};
    case d_os: return {os_names.begin(), os_names.end()};
    case d_month: return {month_names.begin(), month_names.end()};
    case d_weekday: return {weekday_names.begin(), weekday_names.end()};
    case d_hour: return {hour_names.begin(), hour_names.end()};
    default: return {};
  }
}

bool is_numeric_address(std::string_view host) {
  const std::string h(host);
  in_addr v4;
  in6_addr v6;
  return ::inet_pton(AF_INET, h.c_str(), &v4) == 1 || ::inet_pton(AF_INET6, h.c_str(), &v6) == 1;
}

}  // namespace

std::string_view to_string(AgentFamily family) { return family_names[static_cast<std::size_t>(family)]; }
std::string_view to_string(AgentOs os) { return os_names[static_cast<std::size_t>(os)]; }
std::string_view to_string(OriginGroup group) { return group_names[static_cast<std::size_t>(group)]; }

std::optional<OriginGroup> parse_origin_group(std::string_view text) {
  for (std::size_t i = 0; i < group_names.size(); ++i) {
    if (group_names[i] == text) return static_cast<OriginGroup>(i);
  }
  if (text == "self test") return OriginGroup::self_test;
  return std::nullopt;
}

AgentClass classify_agent(std::string_view user_agent) {
  const std::string ua = lower(user_agent);
  AgentClass ac;
  if (has(ua, "compatible")) {
    ac.family = AgentFamily::Compatible;
  } else if (has(ua, "mozilla")) {
    ac.family = AgentFamily::Mozilla;
  } else if (has(ua, "mosaic")) {
    ac.family = AgentFamily::Mosaic;
  }

  if (has(ua, "windows 95") || has(ua, "win95")) {
    ac.os = AgentOs::Win95;
  } else if (has(ua, "windows nt") || has(ua, "winnt")) {
    ac.os = AgentOs::WinNT;
  } else if (has(ua, "win16") || has(ua, "windows 3.1")) {
    ac.os = AgentOs::Win16;
  } else if (has_word_prefix(ua, "win")) {
    ac.os = AgentOs::Windows;
  } else if (has(ua, "sunos") || has(ua, "solaris")) {
    ac.os = AgentOs::SunOS;
  } else if (has(ua, "hp-ux")) {
    ac.os = AgentOs::HPUX;
  } else if (has(ua, "linux")) {
    ac.os = AgentOs::Linux;
  } else if (has(ua, "irix")) {
    ac.os = AgentOs::Irix;
  } else if (has(ua, "macintosh") || has_word_prefix(ua, "mac")) {
    ac.os = AgentOs::Macintosh;
  } else if (has(ua, "os/2")) {
    ac.os = AgentOs::OS2;
  }
  return ac;
}

DomainGroups DomainGroups::defaults() {
  DomainGroups g;
  for (const char* s : {"uni-muenchen.de", "lrz-muenchen.de", "tu-muenchen.de"}) g.add(s, OriginGroup::Uni);
  for (const char* s : {"sni.de", "siemens.de", "dtag.de", "mpg.de", "sdm.de", "bmw.de", "gsf.de"})
    g.add(s, OriginGroup::Com);
  for (const char* s : {"t-online.de", "eunet.de", "metronet.de", "uunet.de"}) g.add(s, OriginGroup::Pro);
  return g;
}

DomainGroups DomainGroups::load(std::istream& in) {
  DomainGroups g;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string suffix, group, extra;
    if (!(fields >> suffix)) continue;
    if (!(fields >> group) || (fields >> extra)) {
      throw DomainGroupsError("line " + std::to_string(number) + ": expected 'suffix group'");
    }
    const auto parsed = parse_origin_group(group);
    if (!parsed || *parsed == OriginGroup::anonymous) {
      throw DomainGroupsError("line " + std::to_string(number) + ": unknown group '" + group + "'");
    }
    g.add(suffix, *parsed);
  }
  return g;
}

void DomainGroups::add(std::string suffix, OriginGroup group) {
  suffix = lower(suffix);
  while (!suffix.empty() && suffix.front() == '.') suffix.erase(0, 1);
  while (!suffix.empty() && suffix.back() == '.') suffix.pop_back();
  if (suffix.empty()) throw DomainGroupsError("empty domain suffix");
  suffixes_[suffix] = group;
}

std::optional<OriginGroup> DomainGroups::lookup(std::string_view host) const {
  std::string h = lower(host);
  while (!h.empty() && h.back() == '.') h.pop_back();
  // Walk from the full name to ever shorter suffixes; the first hit is the longest.
  std::string_view rest = h;
  while (!rest.empty()) {
    if (auto it = suffixes_.find(rest); it != suffixes_.end()) return it->second;
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  return std::nullopt;
}

OriginClass classify_origin(std::string_view peer, const DomainGroups& groups) {
  OriginClass oc;
  if (peer.empty() || peer == "anonymous" || peer == "-") {
    oc.group = OriginGroup::anonymous;
    return oc;
  }
  const std::string host = lower(peer);
  if (host == "localhost" || host == "::1" || host.rfind("127.", 0) == 0 || host.rfind("localhost.", 0) == 0) {
    oc.tld = is_numeric_address(host) ? "numeric" : ".localhost";
    oc.group = OriginGroup::self_test;
    return oc;
  }
  if (is_numeric_address(host)) {
    oc.tld = "numeric";
  } else {
    std::string_view h = host;
    while (!h.empty() && h.back() == '.') h.remove_suffix(1);
    const auto dot = h.rfind('.');
    oc.tld = "." + std::string(dot == std::string_view::npos ? h : h.substr(dot + 1));
  }
  oc.group = groups.lookup(host).value_or(OriginGroup::Other);
  return oc;
}

std::size_t Dimension::count(std::string_view bucket) const {
  for (const auto& [name, n] : buckets) {
    if (name == bucket) return n;
  }
  return 0;
}

std::size_t Dimension::total() const {
  std::size_t t = 0;
  for (const auto& b : buckets) t += b.second;
  return t;
}

std::size_t Dimension::classified() const { return total() - count(unknown_bucket) - count(malformed_bucket); }

std::optional<double> Dimension::share(std::string_view bucket) const {
  if (bucket == unknown_bucket || bucket == malformed_bucket) return std::nullopt;
  const std::size_t c = classified();
  if (c == 0) return std::nullopt;
  return 100.0 * static_cast<double>(count(bucket)) / static_cast<double>(c);
}

const Dimension& Report::dimension(std::string_view name) const {
  for (const auto& d : dimensions) {
    if (d.name == name) return d;
  }
  throw std::out_of_range("no report dimension '" + std::string(name) + "'");
}

Aggregator::Aggregator(AnalyzerOptions options) : options_(std::move(options)) {}

void Aggregator::bump(std::size_t dim, std::string_view bucket) {
  auto& m = counts_[dim];
  if (auto it = m.find(bucket); it != m.end()) {
    ++it->second;
  } else {
    m.emplace(std::string(bucket), 1);
  }
}

void Aggregator::add(const RequestRecord& record) {
  ++records_;
  bump(d_outcome, to_string(record.outcome));
  const OriginClass origin = classify_origin(record.peer, options_.groups);
  bump(d_origin, to_string(origin.group));
  bump(d_tld, origin.tld.empty() ? unknown_bucket : std::string_view(origin.tld));
  const AgentClass agent = classify_agent(record.user_agent);
  if (record.user_agent.empty()) {
    bump(d_family, unknown_bucket);
    bump(d_os, unknown_bucket);
  } else {
    bump(d_family, to_string(agent.family));
    bump(d_os, to_string(agent.os));
  }
  bump(d_language, record.language.empty() ? unknown_bucket : std::string_view(record.language));

  if (!record.timestamp) {
    bump(d_month, unknown_bucket);
    bump(d_weekday, unknown_bucket);
    bump(d_hour, unknown_bucket);
    return;
  }
  using namespace std::chrono;
  const auto local = *record.timestamp + minutes(options_.utc_offset_minutes);
  const auto day = floor<days>(local);
  const year_month_day ymd{day};
  const weekday wd{day};
  const auto hour = duration_cast<hours>(local - day).count();
  bump(d_month, month_names[static_cast<unsigned>(ymd.month()) - 1]);
  bump(d_weekday, weekday_names[wd.iso_encoding() - 1]);
  bump(d_hour, hour_names[static_cast<std::size_t>(hour)]);
}

void Aggregator::add_malformed() {
  ++malformed_;
  for (std::size_t d = 0; d < dimension_count; ++d) bump(d, malformed_bucket);
}

void Aggregator::add_line(std::string_view line) {
  if (auto record = parse_log_line(line)) {
    add(*record);
  } else {
    add_malformed();
  }
}

void Aggregator::add_stream(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    add_line(line);
  }
}

void Aggregator::merge(const Aggregator& other) {
  records_ += other.records_;
  malformed_ += other.malformed_;
  for (std::size_t d = 0; d < dimension_count; ++d) {
    for (const auto& [bucket, n] : other.counts_[d]) counts_[d][bucket] += n;
  }
}

Report Aggregator::report() const {
  Report r;
  r.records = records_;
  r.malformed = malformed_;
  for (std::size_t d = 0; d < dimension_count; ++d) {
    Dimension dim;
    dim.name = std::string(dimension_names[d]);
    const auto& m = counts_[d];
    const auto get = [&](std::string_view key) -> std::size_t {
      const auto it = m.find(key);
      return it == m.end() ? 0 : it->second;
    };
    const auto fixed = fixed_buckets(d);
    if (!fixed.empty()) {
      for (const auto key : fixed) dim.buckets.emplace_back(std::string(key), get(key));
    } else {
      for (const auto& [key, n] : m) {
        if (key != unknown_bucket && key != malformed_bucket) dim.buckets.emplace_back(key, n);
      }
      std::stable_sort(dim.buckets.begin(), dim.buckets.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
    }
    for (const auto key : {unknown_bucket, malformed_bucket}) {
      if (const std::size_t n = get(key)) dim.buckets.emplace_back(std::string(key), n);
    }
    r.dimensions.push_back(std::move(dim));
  }
  return r;
}

Report aggregate(std::istream& log, AnalyzerOptions options) {
  Aggregator a(std::move(options));
  a.add_stream(log);
  return a.report();
}

namespace {

std::string percent(std::optional<double> share) {
  if (!share) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *share);
  return buf;
}

}  // namespace

void write_text_report(std::ostream& out, const Report& report) {
  out << "Fieldname\tValue\tFrequency\tShare\n";
  out << "requests\t\t" << report.total() << "\t\n";
  for (const auto& dim : report.dimensions) {
    out << dim.name << "\t\t" << dim.classified() << "\t\n";
    for (const auto& [bucket, n] : dim.buckets) {
      out << '\t' << bucket << '\t' << n << '\t' << percent(dim.share(bucket)) << '\n';
    }
  }
}

void write_json_report(std::ostream& out, const Report& report) {
  nlohmann::ordered_json j;
  j["records"] = report.records;
  j["malformed"] = report.malformed;
  j["total"] = report.total();
  auto& dims = j["dimensions"];
  dims = nlohmann::ordered_json::object();
  for (const auto& dim : report.dimensions) {
    nlohmann::ordered_json d;
    d["classified"] = dim.classified();
    auto& buckets = d["buckets"];
    buckets = nlohmann::ordered_json::array();
    for (const auto& [bucket, n] : dim.buckets) {
      nlohmann::ordered_json b;
      b["name"] = bucket;
      b["count"] = n;
      if (const auto s = dim.share(bucket)) {
        b["share"] = *s;
      } else {
        b["share"] = nullptr;
      }
      buckets.push_back(std::move(b));
    }
    dims[dim.name] = std::move(d);
  }
  out << j.dump(2) << '\n';
}

}  // namespace rentbound
