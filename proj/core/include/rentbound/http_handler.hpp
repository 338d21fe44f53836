#pragma once

#include "rentbound/estimate.hpp"
#include "rentbound/html.hpp"
#include "rentbound/request_log.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rentbound {

struct HandlerOptions {
  std::size_t max_body = 64 * 1024;
  /// 4xx status codes for errors instead of 200 with an error page.
  bool strict_status = false;
  /// GET /districts (JSON) and GET /form (full questionnaire).
  bool extra_routes = true;
  /// Action URL written into the served questionnaire.
  std::string form_action = "/";
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "text/html; charset=utf-8";
  std::string body;

  /// HTTP/1.0 status line, Content-Type, Content-Length, Connection: close.
  std::string serialize() const;
};

struct RequestHead {
  std::string method;
  std::string target;
  std::string version;
  std::vector<std::pair<std::string, std::string>> headers;

  /// Case-insensitive lookup.
  const std::string* header(std::string_view name) const;
};

/// Parses the request line and header fields (the bytes before the blank
/// line, terminator excluded). Lines may end in CRLF or LF.
std::optional<RequestHead> parse_request_head(std::string_view head);

/// Offset of the first byte after the blank line ending the header, if the
/// buffer contains one.
std::optional<std::size_t> find_header_end(std::string_view buffer);

/// Content-Length of a parsed head: nullopt if absent, throws
/// std::invalid_argument if present but not a plain decimal.
std::optional<std::size_t> content_length(const RequestHead& head);

struct HandleResult {
  HttpResponse response;
  Outcome outcome = Outcome::wrong_request;
  std::string user_agent;
  std::string language;
  /// Human-readable reason for error outcomes.
  std::string detail;
};

/// Processes one complete request (header and body). Pure given the
/// ruleset: POSTed form -> result page; anything unusable -> generic error
/// page with an outcome code. Never throws.
HandleResult handle(std::string_view request, const Ruleset& rs, const HandlerOptions& options = {});

/// Error page for outcomes detected outside handle (timeouts).
HandleResult error_result(Outcome outcome, std::string_view detail, Language lang,
                          const HandlerOptions& options = {});

std::string render_result(const RentEstimate& estimate, const Ruleset& rs, std::string_view language);
std::string render_error(Outcome outcome, std::string_view detail, Language lang);

}  // namespace rentbound
