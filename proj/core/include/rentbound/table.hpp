#pragma once

#include "rentbound/interval.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rentbound {

struct KeyColumn {
  std::string name;
  std::string unit;
  /// Declared range of the column; the gap scan covers this box. When unset
  /// the hull of the column's fact keys is used.
  std::optional<Interval> domain;
};

/// One row: an interval per key column and the value that applies to every
/// point of that box, e.g. year 1966:1977, rooms 1:1 -> -3.5.
struct TableFact {
  std::vector<Interval> keys;
  Rational value;
};

struct Table {
  std::string name;
  std::vector<KeyColumn> key_columns;
  std::string value_unit;
  std::vector<TableFact> facts;

  std::size_t arity() const noexcept { return key_columns.size(); }
};

enum class TableErrc { no_match, arity_mismatch, empty_table, conflicting_facts };

class TableError : public std::runtime_error {
 public:
  TableError(TableErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  TableErrc code() const noexcept { return code_; }

 private:
  TableErrc code_;
};

/// Smallest interval containing the values of every fact whose key box
/// intersects the query box. Throws TableError: arity_mismatch, or no_match
/// when no fact intersects ("no table entry covers query").
Interval lookup_hull(const Table& table, std::span<const Interval> query);

struct TableWarning {
  enum class Kind { gap, overlap };
  Kind kind;
  std::string message;
  /// Gap: the uncovered cell. Overlap: the intersection of the two facts.
  std::vector<Interval> box;
};

/// Structural checks plus a coverage report. Key columns are treated as
/// integer valued: the gap scan enumerates integer cells of the column
/// domains. Throws TableError for an empty table, a fact with the wrong
/// arity, or two facts with identical keys and different values.
std::vector<TableWarning> validate_table(const Table& table);

}  // namespace rentbound
