#include "rentbound/request_log.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace rentbound {

using namespace std::chrono;

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::ok: return "ok";
    case Outcome::wrong_request: return "wrong_request";
    case Outcome::timeout_header: return "timeout_header";
    case Outcome::timeout_body: return "timeout_body";
    case Outcome::syntax_error: return "syntax_error";
  }
  return "?";
}

std::optional<Outcome> parse_outcome(std::string_view text) {
  for (Outcome o : {Outcome::ok, Outcome::wrong_request, Outcome::timeout_header,
                    Outcome::timeout_body, Outcome::syntax_error}) {
    if (to_string(o) == text) return o;
  }
  return std::nullopt;
}

std::string format_timestamp(sys_seconds t) {
  const sys_days day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss<seconds> hms{t - day};
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf.data();
}

namespace {

bool read_number(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return true;
}

std::string sanitize(std::string_view field) {
  std::string out(field);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out.empty() ? "-" : out;
}

}  // namespace

std::optional<sys_seconds> parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS followed by Z or +HH:MM / -HH:MM
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (text.size() < 20) return std::nullopt;
  if (!read_number(text, 0, 4, y) || text[4] != '-' || !read_number(text, 5, 2, mo) || text[7] != '-' ||
      !read_number(text, 8, 2, d) || (text[10] != 'T' && text[10] != ' ') ||
      !read_number(text, 11, 2, h) || text[13] != ':' || !read_number(text, 14, 2, mi) ||
      text[16] != ':' || !read_number(text, 17, 2, s)) {
    return std::nullopt;
  }
  minutes offset{0};
  std::string_view zone = text.substr(19);
  if (zone == "Z") {
    offset = minutes{0};
  } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') && zone[3] == ':') {
    int oh = 0, om = 0;
    if (!read_number(zone, 1, 2, oh) || !read_number(zone, 4, 2, om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset = minutes{oh * 60 + om};
    if (zone[0] == '-') offset = -offset;
  } else {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} - offset;
}

std::string format_log_line(const RequestRecord& r) {
  std::string line = r.timestamp ? format_timestamp(*r.timestamp) : "-";
  line += '\t';
  line += to_string(r.outcome);
  line += '\t';
  line += sanitize(r.peer.empty() ? "anonymous" : r.peer);
  line += '\t';
  line += sanitize(r.user_agent);
  line += '\t';
  line += sanitize(r.language);
  return line;
}

std::optional<RequestRecord> parse_log_line(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 5) return std::nullopt;
  RequestRecord r;
  if (fields[0] != "-") {
    r.timestamp = parse_timestamp(fields[0]);
    if (!r.timestamp) return std::nullopt;
  }
  auto outcome = parse_outcome(fields[1]);
  if (!outcome) return std::nullopt;
  r.outcome = *outcome;
  auto value = [](std::string_view f) { return f == "-" ? std::string() : std::string(f); };
  r.peer = fields[2].empty() || fields[2] == "-" ? "anonymous" : std::string(fields[2]);
  r.user_agent = value(fields[3]);
  r.language = value(fields[4]);
  return r;
}

RequestLog::RequestLog(const std::filesystem::path& path)
    : file_(path, std::ios::app | std::ios::binary), sink_(&file_) {
  if (!file_) throw std::runtime_error("cannot open request log '" + path.string() + "'");
}

RequestLog::RequestLog(std::ostream& sink) : sink_(&sink) {}

void RequestLog::append(const RequestRecord& record) {
  const std::string line = format_log_line(record);
  std::lock_guard lock(mutex_);
  *sink_ << line << '\n';
  sink_->flush();
}

}  // namespace rentbound
