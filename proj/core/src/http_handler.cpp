#include "rentbound/http_handler.hpp"

#include "rentbound/clone_form.hpp"
#include "rentbound/form_codec.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>

namespace rentbound {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

const char* reason_phrase(int status) {
  switch (status) {
    case 200: return "OK";
    case 400: return "Bad Request";
    case 404: return "Not Found";
    case 405: return "Method Not Allowed";
    case 408: return "Request Timeout";
    case 413: return "Payload Too Large";
    default: return "Error";
  }
}

}  // namespace

std::string HttpResponse::serialize() const {
  std::string out = "HTTP/1.0 " + std::to_string(status) + " " + reason_phrase(status) + "\r\n";
  out += "Content-Type: " + content_type + "\r\n";
  out += "Content-Length: " + std::to_string(body.size()) + "\r\n";
  out += "Connection: close\r\n\r\n";
  out += body;
  return out;
}

const std::string* RequestHead::header(std::string_view name) const {
  for (const auto& [k, v] : headers) {
    if (iequals(k, name)) return &v;
  }
  return nullptr;
}

std::optional<std::size_t> find_header_end(std::string_view buffer) {
  const std::size_t crlf = buffer.find("\r\n\r\n");
  const std::size_t lf = buffer.find("\n\n");
  if (crlf == std::string_view::npos && lf == std::string_view::npos) return std::nullopt;
  if (lf == std::string_view::npos || (crlf != std::string_view::npos && crlf < lf)) return crlf + 4;
  return lf + 2;
}

std::optional<RequestHead> parse_request_head(std::string_view head) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < head.size()) {
    std::size_t nl = head.find('\n', start);
    if (nl == std::string_view::npos) nl = head.size();
    std::string_view line = head.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) return std::nullopt;

  RequestHead out;
  const std::string_view request_line = lines.front();
  const std::size_t sp1 = request_line.find(' ');
  if (sp1 == std::string_view::npos) return std::nullopt;
  const std::size_t sp2 = request_line.find(' ', sp1 + 1);
  if (sp2 == std::string_view::npos || request_line.find(' ', sp2 + 1) != std::string_view::npos) {
    return std::nullopt;
  }
  out.method = request_line.substr(0, sp1);
  out.target = request_line.substr(sp1 + 1, sp2 - sp1 - 1);
  out.version = request_line.substr(sp2 + 1);
  if (out.method.empty() || out.target.empty()) return std::nullopt;
  if (!std::all_of(out.method.begin(), out.method.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
    return std::nullopt;
  }
  if (out.version != "HTTP/1.0" && out.version != "HTTP/1.1") return std::nullopt;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t colon = lines[i].find(':');
    if (colon == std::string_view::npos || colon == 0) return std::nullopt;
    std::string_view name = lines[i].substr(0, colon);
    if (name.find_first_of(" \t") != std::string_view::npos) return std::nullopt;
    out.headers.emplace_back(std::string(name), std::string(trim(lines[i].substr(colon + 1))));
  }
  return out;
}

std::optional<std::size_t> content_length(const RequestHead& head) {
  const std::string* value = head.header("Content-Length");
  if (!value) return std::nullopt;
  if (value->empty() || value->size() > 18 ||
      !std::all_of(value->begin(), value->end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw std::invalid_argument("invalid Content-Length '" + *value + "'");
  }
  return static_cast<std::size_t>(std::stoull(*value));
}

std::string render_result(const RentEstimate& est, const Ruleset& rs, std::string_view language) {
  bool supported = true;
  const Language lang = resolve_language(language, &supported);
  const bool de = lang == Language::German;
  const std::string currency = html_escape(rs.meta.currency);
  auto amount = [&](const Rational& v) { return format_amount(v, lang); };
  auto amounts = [&](const Interval& iv) {
    if (iv.is_singleton()) return amount(iv.lo());
    return amount(iv.lo()) + " &ndash; " + amount(iv.hi());
  };
  auto percents = [&](const Interval& iv) {
    if (iv.is_singleton()) return format_percent(iv.lo(), lang) + " %";
    return format_percent(iv.lo(), lang) + " &ndash; " + format_percent(iv.hi(), lang) + " %";
  };
  auto plain = [&](const Interval& iv) {
    const std::string lo = to_decimal_string(iv.lo()).value_or(amount(iv.lo()));
    if (iv.is_singleton()) return lo;
    return lo + " &ndash; " + to_decimal_string(iv.hi()).value_or(amount(iv.hi()));
  };

  std::vector<std::string> warnings = est.warnings;
  if (!supported) {
    warnings.push_back("unsupported language '" + std::string(language) + "'; showing German");
  }

  std::string html = "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>";
  html += de ? "Mietschätzung" : "Rent estimate";
  html += "</title>\n</head>\n<body>\n<h1>";
  html += de ? "Ergebnis der Mietschätzung" : "Rent estimate";
  html += "</h1>\n";
  html += "<p class=\"rent\" data-lo=\"" + to_exact_string(est.rent.lo()) + "\" data-hi=\"" +
          to_exact_string(est.rent.hi()) + "\">";
  html += de ? "Die geschätzte Monatsmiete liegt zwischen <b>" : "The estimated monthly rent is between <b>";
  html += amount(est.rent.lo()) + " " + currency + "</b>";
  html += de ? " und <b>" : " and <b>";
  html += amount(est.rent.hi()) + " " + currency + "</b>.</p>\n";
  if (!est.complete) {
    html += "<p class=\"incomplete\">";
    html += de ? "Schätzung aus unvollständigen Angaben: jede weitere Antwort engt das Intervall ein."
               : "Estimate from incomplete answers: every further answer narrows the interval.";
    html += "</p>\n";
  }

  const auto& b = est.breakdown;
  html += "<table class=\"breakdown\" border=\"1\">\n<tr><th>";
  html += de ? "Faktor" : "Factor";
  html += "</th><th>";
  html += de ? "Wert" : "Value";
  html += "</th></tr>\n";
  auto row = [&](const std::string& label, const std::string& value) {
    html += "<tr><td>" + html_escape(label) + "</td><td>" + value + "</td></tr>\n";
  };
  row(de ? "Wohnfläche (qm)" : "Size (square meters)", plain(b.size));
  row(de ? "Basismiete pro qm" : "Base rent per square meter", amounts(b.base_rent_per_m2) + " " + currency);
  for (const auto& f : b.deviations) {
    row(de && !f.label_de.empty() ? f.label_de : f.label, percents(f.percent));
  }
  row(de ? "Summe der Abweichungen" : "Sum of deviations", percents(b.deviation_sum));
  row(de ? "Ungenauigkeit" : "Imprecision", percents(b.imprecision));
  row(de ? "Nebenkosten" : "Fixed costs", amounts(b.fixed_costs) + " " + currency);
  html += "</table>\n";

  if (!warnings.empty()) {
    html += "<div class=\"warnings\">\n<h2>";
    html += de ? "Hinweise" : "Warnings";
    html += "</h2>\n<ul>\n";
    for (const auto& w : warnings) html += "<li>" + html_escape(w) + "</li>\n";
    html += "</ul>\n</div>\n";
  }
  html += "</body>\n</html>\n";
  return html;
}

std::string render_error(Outcome outcome, std::string_view detail, Language lang) {
  const bool de = lang == Language::German;
  std::string html = "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>";
  html += de ? "Fehler" : "Error";
  html += "</title>\n</head>\n<body>\n<h1>";
  html += de ? "Ihre Anfrage konnte nicht bearbeitet werden" : "Your request could not be processed";
  html += "</h1>\n<p class=\"outcome\" data-outcome=\"" + std::string(to_string(outcome)) + "\">";
  html += html_escape(detail);
  html += "</p>\n<p>";
  html += de ? "Typische Fehler:" : "Typical errors:";
  html += "</p>\n<ul>\n";
  if (de) {
    html += "<li>Bitte nur ganze Zahlen eingeben (keine Kommazahlen).</li>\n";
    html += "<li>Der untere Wert darf nicht größer als der obere sein.</li>\n";
    html += "<li>Die Werte müssen im erlaubten Bereich liegen.</li>\n";
    html += "<li>Bitte das Formular vollständig absenden und nicht zu lange warten.</li>\n";
  } else {
    html += "<li>Please enter whole numbers only (no decimals).</li>\n";
    html += "<li>The lower value must not be greater than the upper value.</li>\n";
    html += "<li>Values must lie within the allowed ranges.</li>\n";
    html += "<li>Please submit the form in one go and without long pauses.</li>\n";
  }
  html += "</ul>\n</body>\n</html>\n";
  return html;
}

HandleResult error_result(Outcome outcome, std::string_view detail, Language lang,
                          const HandlerOptions& options) {
  HandleResult r;
  r.outcome = outcome;
  r.detail = std::string(detail);
  r.response.body = render_error(outcome, detail, lang);
  r.response.status = 200;
  if (options.strict_status) {
    switch (outcome) {
      case Outcome::ok: break;
      case Outcome::wrong_request: r.response.status = 400; break;
      case Outcome::syntax_error: r.response.status = 400; break;
      case Outcome::timeout_header:
      case Outcome::timeout_body: r.response.status = 408; break;
    }
  }
  return r;
}

namespace {

HandleResult ok_result(std::string body, std::string content_type = "text/html; charset=utf-8") {
  HandleResult r;
  r.outcome = Outcome::ok;
  r.response.body = std::move(body);
  r.response.content_type = std::move(content_type);
  return r;
}

std::string districts_json(const Ruleset& rs) {
  nlohmann::json out = nlohmann::json::object();
  out["districts"] = nlohmann::json::array();
  for (const auto& d : rs.districts) {
    out["districts"].push_back({{"name", d.name}, {"category", to_exact_string(d.category)}});
  }
  return out.dump();
}

HandleResult handle_unchecked(std::string_view request, const Ruleset& rs, const HandlerOptions& options) {
  const Language fallback = Language::German;
  const auto header_end = find_header_end(request);
  if (!header_end) return error_result(Outcome::wrong_request, "incomplete request header", fallback, options);
  const auto head = parse_request_head(request.substr(0, *header_end));
  if (!head) return error_result(Outcome::wrong_request, "malformed request header", fallback, options);

  std::string user_agent;
  if (const std::string* ua = head->header("User-Agent")) user_agent = *ua;
  auto with_agent = [&](HandleResult r) {
    r.user_agent = user_agent;
    return r;
  };

  std::optional<std::size_t> length;
  try {
    length = content_length(*head);
  } catch (const std::invalid_argument& e) {
    return with_agent(error_result(Outcome::wrong_request, e.what(), fallback, options));
  }

  if (head->method == "GET" && options.extra_routes) {
    const std::string path = head->target.substr(0, head->target.find('?'));
    if (path == "/districts") return with_agent(ok_result(districts_json(rs), "application/json"));
    if (path == "/form") {
      const std::string all[] = {"all"};
      CloneOptions clone;
      clone.action = options.form_action;
      return with_agent(ok_result(clone_form(rs, all, {}, clone)));
    }
  }
  if (head->method != "POST") {
    HandleResult r = error_result(Outcome::wrong_request, "the service only answers form submissions", fallback,
                                  options);
    if (options.strict_status) r.response.status = 405;
    return with_agent(std::move(r));
  }
  if (const std::string* type = head->header("Content-Type")) {
    if (type->find("multipart/") != std::string::npos) {
      return with_agent(error_result(Outcome::wrong_request, "unsupported content type", fallback, options));
    }
  }

  std::string_view body = request.substr(*header_end);
  if (length) {
    if (*length > options.max_body) {
      HandleResult r = error_result(Outcome::wrong_request, "request body too large", fallback, options);
      if (options.strict_status) r.response.status = 413;
      return with_agent(std::move(r));
    }
    if (body.size() < *length) {
      return with_agent(error_result(Outcome::wrong_request, "truncated request body", fallback, options));
    }
    body = body.substr(0, *length);
  } else if (body.size() > options.max_body) {
    HandleResult r = error_result(Outcome::wrong_request, "request body too large", fallback, options);
    if (options.strict_status) r.response.status = 413;
    return with_agent(std::move(r));
  }

  FieldMap fields;
  try {
    fields = decode_body(body);
  } catch (const FormError& e) {
    return with_agent(error_result(Outcome::syntax_error, e.what(), fallback, options));
  }
  std::string language;
  for (const auto& [name, value] : fields) {
    if (name == "Language") language = value;
  }
  const Language lang = resolve_language(language);
  auto syntax_error = [&](const std::string& detail) {
    HandleResult r = with_agent(error_result(Outcome::syntax_error, detail, lang, options));
    r.language = language;
    return r;
  };

  const FieldSchema schema = make_schema(rs);
  BoundForm bound;
  try {
    bound = bind_fields(fields, schema, rs);
  } catch (const FormError& e) {
    return syntax_error(e.what());
  }
  std::optional<RentEstimate> est;
  try {
    est = estimate(bound.answers, rs);
  } catch (const EstimateError& e) {
    return syntax_error(e.what());
  }
  est->warnings.insert(est->warnings.begin(), bound.warnings.begin(), bound.warnings.end());
  HandleResult r = ok_result(render_result(*est, rs, bound.language));
  r.user_agent = user_agent;
  r.language = bound.language;
  return r;
}

}  // namespace

HandleResult handle(std::string_view request, const Ruleset& rs, const HandlerOptions& options) {
  try {
    return handle_unchecked(request, rs, options);
  } catch (const std::exception& e) {
    return error_result(Outcome::wrong_request, std::string("internal error: ") + e.what(), Language::German,
                        options);
  } catch (...) {
    return error_result(Outcome::wrong_request, "internal error", Language::German, options);
  }
}

}  // namespace rentbound
