#include "rentbound/table.hpp"

#include <algorithm>
#include <set>

namespace rentbound {

Interval lookup_hull(const Table& table, std::span<const Interval> query) {
  if (query.size() != table.arity()) {
    throw TableError(TableErrc::arity_mismatch,
                     "table '" + table.name + "' expects " + std::to_string(table.arity()) +
                         " keys, query has " + std::to_string(query.size()));
  }
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  for (const auto& fact : table.facts) {
    bool match = fact.keys.size() == query.size();
    for (std::size_t i = 0; match && i < query.size(); ++i) match = overlaps(fact.keys[i], query[i]);
    if (!match) continue;
    if (!lo || fact.value < *lo) lo = fact.value;
    if (!hi || fact.value > *hi) hi = fact.value;
  }
  if (!lo) {
    std::string box;
    for (std::size_t i = 0; i < query.size(); ++i) {
      if (i) box += " x ";
      box += table.key_columns[i].name + " " + to_string(query[i]);
    }
    throw TableError(TableErrc::no_match,
                     "no table entry covers query: table '" + table.name + "', " + box);
  }
  return Interval(*lo, *hi);
}

namespace {

std::string describe_box(const Table& table, const std::vector<Interval>& box) {
  std::string out;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (i) out += " x ";
    out += table.key_columns[i].name + " " + to_string(box[i]);
  }
  return out;
}

// Integer segment [first, last] of a column.
struct Segment {
  Rational first;
  Rational last;
};

constexpr std::size_t kMaxGapCells = 1'000'000;

}  // namespace

std::vector<TableWarning> validate_table(const Table& table) {
  if (table.facts.empty()) {
    throw TableError(TableErrc::empty_table, "table '" + table.name + "' has no facts");
  }
  const std::size_t arity = table.arity();
  for (std::size_t i = 0; i < table.facts.size(); ++i) {
    if (table.facts[i].keys.size() != arity) {
      throw TableError(TableErrc::arity_mismatch,
                       "table '" + table.name + "' fact #" + std::to_string(i + 1) + " has " +
                           std::to_string(table.facts[i].keys.size()) + " keys, expected " +
                           std::to_string(arity));
    }
  }

  std::vector<TableWarning> warnings;
  for (std::size_t i = 0; i < table.facts.size(); ++i) {
    for (std::size_t j = i + 1; j < table.facts.size(); ++j) {
      const auto& a = table.facts[i];
      const auto& b = table.facts[j];
      if (a.keys == b.keys) {
        if (a.value != b.value) {
          throw TableError(TableErrc::conflicting_facts,
                           "table '" + table.name + "' has two facts for " +
                               describe_box(table, a.keys) + " with different values");
        }
        continue;
      }
      if (a.value == b.value) continue;
      std::vector<Interval> common;
      for (std::size_t k = 0; k < arity; ++k) {
        auto c = intersect(a.keys[k], b.keys[k]);
        if (!c) break;
        common.push_back(*c);
      }
      if (common.size() != arity) continue;
      warnings.push_back({TableWarning::Kind::overlap,
                          "table '" + table.name + "': facts #" + std::to_string(i + 1) + " and #" +
                              std::to_string(j + 1) + " overlap on " +
                              describe_box(table, common) + " with different values",
                          common});
    }
  }

  // Gap scan: cut every column domain at the fact boundaries, then check
  // each resulting integer cell against the facts.
  std::vector<std::vector<Segment>> columns(arity);
  std::size_t cells = 1;
  for (std::size_t k = 0; k < arity; ++k) {
    Interval dom = table.key_columns[k].domain.value_or(table.facts.front().keys[k]);
    if (!table.key_columns[k].domain) {
      for (const auto& f : table.facts) dom = hull(dom, f.keys[k]);
    }
    const Rational first = ceil(dom.lo());
    const Rational last = floor(dom.hi());
    if (first > last) return warnings;
    std::set<Rational> cuts{first, last + 1};
    for (const auto& f : table.facts) {
      const Rational lo = ceil(f.keys[k].lo());
      const Rational hi_next = floor(f.keys[k].hi()) + 1;
      if (lo > first && lo <= last) cuts.insert(lo);
      if (hi_next > first && hi_next <= last) cuts.insert(hi_next);
    }
    std::vector<Rational> sorted(cuts.begin(), cuts.end());
    for (std::size_t s = 0; s + 1 < sorted.size(); ++s) {
      columns[k].push_back({sorted[s], sorted[s + 1] - 1});
    }
    cells *= columns[k].size();
    if (cells > kMaxGapCells) {
      warnings.push_back({TableWarning::Kind::gap,
                          "table '" + table.name + "': key space too fragmented for gap scan",
                          {}});
      return warnings;
    }
  }

  std::vector<std::size_t> cursor(arity, 0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    bool covered = false;
    for (const auto& f : table.facts) {
      bool inside = true;
      for (std::size_t k = 0; inside && k < arity; ++k) {
        const Segment& seg = columns[k][cursor[k]];
        inside = f.keys[k].lo() <= seg.first && seg.last <= f.keys[k].hi();
      }
      if (inside) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      std::vector<Interval> box;
      for (std::size_t k = 0; k < arity; ++k) {
        const Segment& seg = columns[k][cursor[k]];
        box.emplace_back(seg.first, seg.last);
      }
      warnings.push_back({TableWarning::Kind::gap,
                          "table '" + table.name + "': no fact covers " + describe_box(table, box),
                          box});
    }
    for (std::size_t k = arity; k-- > 0;) {
      if (++cursor[k] < columns[k].size()) break;
      cursor[k] = 0;
    }
  }
  return warnings;
}

}  // namespace rentbound
