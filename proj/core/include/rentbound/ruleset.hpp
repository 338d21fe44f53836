#pragma once

#include "rentbound/interval.hpp"
#include "rentbound/table.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rentbound {

/// Which answer feeds a table key column.
enum class KeySource { size, rooms, year, district_category };

std::string_view to_string(KeySource source);

/// A table plus the answer each of its key columns is read from.
struct BoundTable {
  Table table;
  std::vector<KeySource> sources;
  std::string label;
  std::string label_de;
};

struct District {
  std::string name;
  Rational category;
};

enum class FlagGroup { house, flat };

/// A yes/no question and the deviation (percent) each answer contributes.
struct FlagQuestion {
  std::string id;
  FlagGroup group;
  std::string label;
  std::string label_de;
  Rational yes_percent;
  Rational no_percent;
};

struct FixedCostItem {
  std::string id;
  std::string label;
  std::string label_de;
  Rational min;
  Rational max;
};

/// One edition of a rent index: allowed input ranges, the base-rent table,
/// deviation tables and questions, the imprecision band and fixed costs.
struct Ruleset {
  struct Meta {
    std::string city;
    int edition = 0;
    std::string currency;
    std::vector<std::string> notes;
  };
  struct Ranges {
    Interval size;
    Interval rooms;
    Interval year;
  };

  Meta meta;
  Ranges ranges;
  std::vector<District> districts;
  BoundTable base_rent;
  std::vector<BoundTable> deviation_tables;
  std::vector<FlagQuestion> flags;  // house questions first, then flat
  std::variant<Interval, BoundTable> imprecision;
  std::vector<FixedCostItem> fixed_costs;

  /// Non-fatal findings from loading (table gaps and overlaps, the
  /// total-deviation check).
  std::vector<std::string> warnings;

  const District* find_district(std::string_view name) const;
  const FlagQuestion* find_flag(std::string_view id) const;
  const FixedCostItem* find_fixed_cost(std::string_view id) const;
  /// Hull of all district categories.
  Interval category_range() const;
  std::vector<const FlagQuestion*> flags_in(FlagGroup group) const;
};

class RulesetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a ruleset document (JSON syntax, decimal strings for
/// every number). Throws RulesetError with the offending location.
Ruleset parse_ruleset(std::string_view document);
Ruleset load_ruleset(std::istream& source);
Ruleset load_ruleset_file(const std::filesystem::path& path);

/// Hull of the total deviation percentage over every possible answer set.
Interval total_deviation_range(const Ruleset& rs);

}  // namespace rentbound
