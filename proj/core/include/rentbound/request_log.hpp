#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace rentbound {

enum class Outcome { ok, wrong_request, timeout_header, timeout_body, syntax_error };

std::string_view to_string(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view text);

/// One line of the request log.
struct RequestRecord {
  /// Unset when the source did not capture a time (written as "-").
  std::optional<std::chrono::sys_seconds> timestamp;
  Outcome outcome = Outcome::wrong_request;
  /// Host name or address of the client; "anonymous" when none is known.
  std::string peer = "anonymous";
  std::string user_agent;
  std::string language;

  friend bool operator==(const RequestRecord&, const RequestRecord&) = default;
};

/// Tab separated: timestamp (ISO-8601 UTC, "2024-03-04T11:05:00Z"), outcome,
/// peer, user agent, language. Empty fields are written as "-"; tabs and line
/// breaks inside fields become spaces. No trailing newline.
std::string format_log_line(const RequestRecord& record);

/// Inverse of format_log_line. Also accepts "+HH:MM"/"-HH:MM" offsets in
/// the timestamp. Returns nullopt for anything malformed.
std::optional<RequestRecord> parse_log_line(std::string_view line);

std::string format_timestamp(std::chrono::sys_seconds t);
std::optional<std::chrono::sys_seconds> parse_timestamp(std::string_view text);

/// Append-only, line-buffered, serialized log writer.
class RequestLog {
 public:
  /// Appends to the file at path (created if missing). Throws
  /// std::runtime_error if it cannot be opened.
  explicit RequestLog(const std::filesystem::path& path);
  /// Writes to a caller-owned stream.
  explicit RequestLog(std::ostream& sink);

  RequestLog(const RequestLog&) = delete;
  RequestLog& operator=(const RequestLog&) = delete;

  void append(const RequestRecord& record);

 private:
  std::ofstream file_;
  std::ostream* sink_;
  std::mutex mutex_;
};

}  // namespace rentbound
