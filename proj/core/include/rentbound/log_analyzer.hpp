#pragma once

#include "rentbound/request_log.hpp"

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rentbound {

enum class AgentFamily { Mozilla, Compatible, Mosaic, Other };
enum class AgentOs { Win95, Win16, WinNT, Windows, SunOS, HPUX, Linux, Irix, Macintosh, OS2, Other };

std::string_view to_string(AgentFamily family);
std::string_view to_string(AgentOs os);

struct AgentClass {
  AgentFamily family = AgentFamily::Other;
  AgentOs os = AgentOs::Other;
  friend bool operator==(const AgentClass&, const AgentClass&) = default;
};

/// Keyword classification, case-insensitive. "compatible" wins over
/// "Mozilla" (Explorer announces itself as both).
AgentClass classify_agent(std::string_view user_agent);

enum class OriginGroup { Uni, Com, Pro, Other, anonymous, self_test };

std::string_view to_string(OriginGroup group);
std::optional<OriginGroup> parse_origin_group(std::string_view text);

class DomainGroupsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Domain suffix -> group mapping. A host matches a suffix when it equals it
/// or ends with "." + suffix; the longest matching suffix wins.
class DomainGroups {
 public:
  /// Local university, company and provider domains of the original sample.
  static DomainGroups defaults();
  /// Lines "suffix group", '#' comments, blank lines ignored. Throws
  /// DomainGroupsError with the line number on a bad line.
  static DomainGroups load(std::istream& in);

  void add(std::string suffix, OriginGroup group);
  std::optional<OriginGroup> lookup(std::string_view host) const;
  std::size_t size() const noexcept { return suffixes_.size(); }

 private:
  std::map<std::string, OriginGroup, std::less<>> suffixes_;
};

struct OriginClass {
  /// ".de", ".com", ...; "numeric" for literal addresses, empty when anonymous.
  std::string tld;
  OriginGroup group = OriginGroup::Other;
  friend bool operator==(const OriginClass&, const OriginClass&) = default;
};

/// Empty or "anonymous" peers are anonymous; loopback peers are self tests.
OriginClass classify_origin(std::string_view peer, const DomainGroups& groups);

inline constexpr std::string_view unknown_bucket = "unknown";
inline constexpr std::string_view malformed_bucket = "malformed";

struct Dimension {
  std::string name;
  /// Fixed bucket order for enumerated dimensions; open dimensions (tld,
  /// language) by descending count, then name. "unknown" and "malformed"
  /// come last when nonzero.
  std::vector<std::pair<std::string, std::size_t>> buckets;

  std::size_t count(std::string_view bucket) const;
  std::size_t total() const;
  /// Records with a real classification (not unknown, not malformed).
  std::size_t classified() const;
  /// Percentage of classified(); nullopt for unknown/malformed or when
  /// nothing was classified.
  std::optional<double> share(std::string_view bucket) const;
};

struct Report {
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::size_t total() const noexcept { return records + malformed; }
  /// outcome, origin, tld, agent_family, agent_os, language, month, weekday, hour.
  std::vector<Dimension> dimensions;

  const Dimension& dimension(std::string_view name) const;
};

struct AnalyzerOptions {
  /// Fixed offset from UTC used for month, weekday and hour (no DST).
  int utc_offset_minutes = 60;
  DomainGroups groups = DomainGroups::defaults();
};

/// Streaming single-pass counter. Reports from separate aggregators over
/// disjoint logs merge by addition.
class Aggregator {
 public:
  explicit Aggregator(AnalyzerOptions options = {});

  void add(const RequestRecord& record);
  /// Parses one log line; unparseable lines land in the malformed buckets.
  void add_line(std::string_view line);
  void add_malformed();
  /// Reads lines until EOF; blank lines are skipped.
  void add_stream(std::istream& in);
  void merge(const Aggregator& other);

  Report report() const;

 private:
  static constexpr std::size_t dimension_count = 9;
  void bump(std::size_t dim, std::string_view bucket);

  AnalyzerOptions options_;
  std::size_t records_ = 0;
  std::size_t malformed_ = 0;
  std::array<std::map<std::string, std::size_t, std::less<>>, dimension_count> counts_;
};

Report aggregate(std::istream& log, AnalyzerOptions options = {});

/// Tab-separated "Fieldname / Value / Frequency / Share" tables.
void write_text_report(std::ostream& out, const Report& report);
void write_json_report(std::ostream& out, const Report& report);

}  // namespace rentbound
