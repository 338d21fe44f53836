#include "cli.hpp"

#include "rentbound/clone_form.hpp"
#include "rentbound/estimate.hpp"
#include "rentbound/form_codec.hpp"
#include "rentbound/html.hpp"
#include "rentbound/http_server.hpp"
#include "rentbound/log_analyzer.hpp"
#include "rentbound/ruleset.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#ifndef RENTBOUND_DEFAULT_RULESET
#define RENTBOUND_DEFAULT_RULESET "sample_ruleset.json"
#endif

namespace rentbound::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

std::atomic<HttpServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (HttpServer* s = g_server.load()) s->stop();
}

Ruleset load(const std::string& path) {
  try {
    return load_ruleset_file(path);
  } catch (const RulesetError& e) {
    throw Failure{exit_ruleset, e.what()};
  }
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{exit_io, "cannot read '" + path + "'"};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text) || !file.flush()) throw Failure{exit_io, "cannot write '" + path + "'"};
}

std::chrono::milliseconds to_ms(double seconds) {
  return std::chrono::milliseconds(static_cast<long long>(std::llround(seconds * 1000.0)));
}

Language language_option(const std::string& lang, std::ostream& err) {
  bool supported = true;
  const Language l = resolve_language(lang, &supported);
  if (!supported) err << "warning: unsupported language '" << lang << "', using German\n";
  return l;
}

// Inline "name=value" arguments, taken literally (UTF-8, no percent decoding).
FieldMap inline_fields(const std::vector<std::string>& pairs) {
  FieldMap fields;
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw Failure{exit_usage, "expected name=value, got '" + p + "'"};
    fields.emplace_back(p.substr(0, eq), p.substr(eq + 1));
  }
  return fields;
}

// A form body as POSTed; line breaks also separate fields.
FieldMap file_fields(const std::string& text) {
  std::string body = text;
  std::replace(body.begin(), body.end(), '\n', '&');
  try {
    return decode_body(body);
  } catch (const FormError& e) {
    throw Failure{exit_estimate, e.what()};
  }
}

struct Common {
  std::string ruleset = default_ruleset_path();
  std::string lang = "German";
};

void add_ruleset(CLI::App* app, Common& c) {
  app->add_option("--ruleset", c.ruleset, "Ruleset JSON file")->envname("RENT_RULESET")->capture_default_str();
}

void add_lang(CLI::App* app, Common& c) {
  app->add_option("--lang", c.lang, "Output language (German or English)")->envname("RENT_LANG")->capture_default_str();
}

void print_interval_line(std::ostream& out, std::string_view label, const Interval& iv, Language lang,
                         std::string_view unit) {
  out << label << ": " << format_amount(iv.lo(), lang) << " .. " << format_amount(iv.hi(), lang);
  if (!unit.empty()) out << ' ' << unit;
  out << '\n';
}

void print_percent_line(std::ostream& out, std::string_view label, const Interval& iv, Language lang) {
  out << label << ": " << format_percent(iv.lo(), lang) << " .. " << format_percent(iv.hi(), lang) << '\n';
}

void print_estimate(std::ostream& out, const RentEstimate& est, const Ruleset& rs, Language lang, bool exact) {
  if (exact) {
    out << "rent\t" << to_exact_string(est.rent.lo()) << '\t' << to_exact_string(est.rent.hi()) << '\n';
    out << "complete\t" << (est.complete ? "yes" : "no") << '\n';
    return;
  }
  const bool en = lang == Language::English;
  const std::string& cur = rs.meta.currency;
  print_interval_line(out, en ? "Estimated rent" : "Geschätzte Miete", est.rent, lang, cur);
  if (!est.complete) out << (en ? "Estimate from incomplete answers" : "Schätzung aus unvollständigen Angaben") << '\n';
  const auto& b = est.breakdown;
  print_interval_line(out, en ? "  Size" : "  Größe", b.size, lang, "m2");
  print_interval_line(out, en ? "  Basic rent per m2" : "  Grundmiete pro m2", b.base_rent_per_m2, lang, cur);
  for (const auto& d : b.deviations) {
    if (d.percent == Interval::point(0)) continue;
    print_percent_line(out, "  " + d.id, d.percent, lang);
  }
  print_percent_line(out, en ? "  Sum of deviations" : "  Summe der Abweichungen", b.deviation_sum, lang);
  print_percent_line(out, en ? "  Imprecision" : "  Unschärfe", b.imprecision, lang);
  print_interval_line(out, en ? "  Fixed costs" : "  Nebenkosten", b.fixed_costs, lang, cur);
  for (const auto& w : est.warnings) out << (en ? "warning: " : "Hinweis: ") << w << '\n';
}

int do_estimate(const Common& c, const std::string& answers_path, const std::vector<std::string>& pairs,
                bool exact, std::ostream& out, std::ostream& err) {
  const Ruleset rs = load(c.ruleset);
  const Language lang = language_option(c.lang, err);
  FieldMap fields;
  if (!answers_path.empty()) fields = file_fields(read_file(answers_path));
  const FieldMap extra = inline_fields(pairs);
  fields.insert(fields.end(), extra.begin(), extra.end());
  try {
    const FieldSchema schema = make_schema(rs);
    const BoundForm form = bind_fields(fields, schema, rs);
    for (const auto& w : form.warnings) err << "warning: " << w << '\n';
    const RentEstimate est = estimate(form.answers, rs);
    print_estimate(out, est, rs, lang, exact);
  } catch (const FormError& e) {
    throw Failure{exit_estimate, e.what()};
  } catch (const EstimateError& e) {
    throw Failure{exit_estimate, e.what()};
  }
  return exit_ok;
}

int do_validate(const Common& c, std::ostream& out) {
  const Ruleset rs = load(c.ruleset);
  out << "ok: " << rs.meta.city << ' ' << rs.meta.edition << ": " << rs.districts.size() << " districts, "
      << rs.base_rent.table.facts.size() << " base rent entries, " << rs.deviation_tables.size()
      << " deviation tables, " << rs.flags.size() << " questions, " << rs.fixed_costs.size() << " fixed-cost items\n";
  const Interval dev = total_deviation_range(rs);
  out << "total deviation: " << format_fixed(dev.lo(), 1) << "% .. " << format_fixed(dev.hi(), 1) << "%\n";
  for (const auto& w : rs.warnings) out << "warning: " << w << '\n';
  return exit_ok;
}

int do_stats(const std::vector<std::string>& logs, const std::string& format, int offset,
             const std::string& groups_path, const std::string& output, std::ostream& out) {
  AnalyzerOptions options;
  options.utc_offset_minutes = offset;
  if (!groups_path.empty()) {
    std::ifstream in(groups_path);
    if (!in) throw Failure{exit_io, "cannot read '" + groups_path + "'"};
    try {
      options.groups = DomainGroups::load(in);
    } catch (const DomainGroupsError& e) {
      throw Failure{exit_usage, groups_path + ": " + e.what()};
    }
  }
  Aggregator total(options);
  for (const auto& path : logs) {
    Aggregator part(options);
    if (path == "-") {
      part.add_stream(std::cin);
    } else {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw Failure{exit_io, "cannot read '" + path + "'"};
      part.add_stream(in);
    }
    total.merge(part);
  }
  std::ostringstream text;
  if (format == "json") {
    write_json_report(text, total.report());
  } else {
    write_text_report(text, total.report());
  }
  emit(output, out, text.str());
  return exit_ok;
}

int do_clone(const Common& c, const std::vector<std::string>& fields, const std::vector<std::string>& fixed,
             const std::string& action, const std::string& title, const std::string& output, std::ostream& out,
             std::ostream& err) {
  const Ruleset rs = load(c.ruleset);
  CloneOptions options;
  options.action = action;
  options.language = language_option(c.lang, err);
  if (!title.empty()) options.title = title;
  std::vector<std::string> subset;
  for (const auto& f : fields) {
    std::stringstream s(f);
    std::string item;
    while (std::getline(s, item, ',')) {
      if (!item.empty()) subset.push_back(item);
    }
  }
  std::string html;
  try {
    html = clone_form(rs, subset, inline_fields(fixed), options);
  } catch (const CloneError& e) {
    throw Failure{exit_usage, e.what()};
  } catch (const FormError& e) {
    throw Failure{exit_usage, e.what()};
  }
  emit(output, out, html);
  return exit_ok;
}

int do_serve(const Common& c, ServerConfig config, double header_s, double body_s, std::ostream& err) {
  config.header_timeout = to_ms(header_s);
  config.body_timeout = to_ms(body_s);
  config.ruleset_path = c.ruleset;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw Failure{exit_usage, e.what()};
  }
  Ruleset rs = load(c.ruleset);
  for (const auto& w : rs.warnings) err << "warning: " << w << '\n';
  std::unique_ptr<RequestLog> log;
  if (!config.log_path.empty()) {
    try {
      log = std::make_unique<RequestLog>(config.log_path);
    } catch (const std::exception& e) {
      throw Failure{exit_io, e.what()};
    }
  }
  HttpServer server(config, std::move(rs), log.get());
  try {
    server.listen();
  } catch (const ServerError& e) {
    throw Failure{exit_io, e.what()};
  }
  err << "listening on " << config.bind_address << ':' << server.port() << '\n';
  g_server.store(&server);
  auto old_int = std::signal(SIGINT, on_signal);
  auto old_term = std::signal(SIGTERM, on_signal);
  server.run();
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);
  g_server.store(nullptr);
  err << "stopped after " << server.handled() << " requests\n";
  return exit_ok;
}

}  // namespace

std::string default_ruleset_path() { return RENTBOUND_DEFAULT_RULESET; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interval rent estimates for a rent survey ruleset", "rentbound"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "rentbound 0.1.0");

  Common common;

  auto* serve = app.add_subcommand("serve", "Answer questionnaire POSTs over HTTP/1.0");
  ServerConfig config;
  double header_s = 10, body_s = 30;
  std::string log_path;
  add_ruleset(serve, common);
  serve->add_option("--port", config.port, "TCP port (0 picks a free one)")->envname("RENT_PORT")->capture_default_str();
  serve->add_option("--bind", config.bind_address, "IPv4 address to bind")->envname("RENT_BIND")->capture_default_str();
  serve->add_option("--log", log_path, "Request log file (appended)")->envname("RENT_LOG");
  serve->add_option("--header-timeout", header_s, "Seconds allowed for the request header")
      ->envname("RENT_HEADER_TIMEOUT")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve->add_option("--body-timeout", body_s, "Seconds allowed for the request body")
      ->envname("RENT_BODY_TIMEOUT")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve->add_option("--max-body", config.max_body, "Largest accepted body in bytes")
      ->envname("RENT_MAX_BODY")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve->add_flag("--strict-status", config.strict_status, "Answer errors with 4xx codes");
  bool no_extra = false;
  serve->add_flag("--no-extra-routes", no_extra, "Disable GET /districts and GET /form");
  serve->add_flag("--resolve-peers", config.resolve_peers, "Log client host names instead of addresses");

  auto* est = app.add_subcommand("estimate", "Estimate the rent for form answers");
  std::string answers_path;
  std::vector<std::string> pairs;
  bool exact = false;
  add_ruleset(est, common);
  add_lang(est, common);
  est->add_option("--answers", answers_path, "File holding a form body ('-' for stdin)");
  est->add_flag("--exact", exact, "Print exact rational bounds");
  est->add_option("fields", pairs, "Answers as name=value, form field names");

  auto* val = app.add_subcommand("validate", "Check a ruleset and list its warnings");
  add_ruleset(val, common);

  auto* stats = app.add_subcommand("stats", "Summarize request logs");
  std::vector<std::string> logs;
  std::string format = "text", groups_path, stats_output;
  int offset = 60;
  stats->add_option("logs", logs, "Log files ('-' for stdin)")->required();
  stats->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  stats->add_option("--utc-offset", offset, "Minutes east of UTC for month/weekday/hour")->capture_default_str();
  stats->add_option("--domain-groups", groups_path, "Domain suffix to group mapping");
  stats->add_option("-o,--output", stats_output, "Write the report here");

  auto* clone = app.add_subcommand("clone-form", "Emit a standalone subset of the questionnaire");
  std::vector<std::string> fields, fixed;
  std::string action = "/", title, clone_output;
  add_ruleset(clone, common);
  add_lang(clone, common);
  clone->add_option("--fields", fields, "Sections or field names, comma separated");
  clone->add_option("--fix", fixed, "Hidden fixed answer name=value");
  clone->add_option("--action", action, "Form action URL")->capture_default_str();
  clone->add_option("--title", title, "Page title");
  clone->add_option("-o,--output", clone_output, "Write the page here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  try {
    if (*serve) {
      config.log_path = log_path;
      config.extra_routes = !no_extra;
      return do_serve(common, config, header_s, body_s, err);
    }
    if (*est) return do_estimate(common, answers_path, pairs, exact, out, err);
    if (*val) return do_validate(common, out);
    if (*stats) return do_stats(logs, format, offset, groups_path, stats_output, out);
    if (*clone) return do_clone(common, fields, fixed, action, title, clone_output, out, err);
  } catch (const Failure& f) {
    err << "rentbound: " << f.message << '\n';
    return f.code;
  }
  return exit_usage;
}

}  // namespace rentbound::cli
