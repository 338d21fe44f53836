#pragma once

#include "rentbound/ruleset.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rentbound {

enum class TriState { Yes, No, Unknown };

/// Questionnaire answers. Any field may be missing; a missing interval means
/// the full allowed range and a missing district means "any district".
/// Flag maps hold one entry per question (Unknown when not answered); fixed
/// costs hold only the answered items.
struct Answers {
  std::optional<Interval> size;
  std::optional<Interval> rooms;
  std::optional<Interval> year;
  std::optional<std::string> district;
  std::map<std::string, TriState> house_flags;
  std::map<std::string, TriState> flat_flags;
  std::map<std::string, Interval> fixed_costs;

  friend bool operator==(const Answers&, const Answers&) = default;

  /// Flag state by question id; Unknown if absent.
  TriState flag(const std::string& id) const;
};

struct FactorContribution {
  std::string id;
  std::string label;
  std::string label_de;
  Interval percent;
};

struct RentBreakdown {
  Interval size;
  Interval base_rent_per_m2;
  std::vector<FactorContribution> deviations;
  Interval deviation_sum;  // percent
  Interval imprecision;    // percent
  Interval fixed_costs;    // currency per month
};

struct RentEstimate {
  Interval rent;  // currency per month
  RentBreakdown breakdown;
  /// True when every question was answered with a single value.
  bool complete = false;
  std::vector<std::string> warnings;
};

enum class EstimateErrc { out_of_domain, unknown_district, no_table_entry, inconsistent_answers };

class EstimateError : public std::runtime_error {
 public:
  EstimateError(EstimateErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  EstimateErrc code() const noexcept { return code_; }

 private:
  EstimateErrc code_;
};

/// Blank form: allowed ranges for the numeric questions, every flag Unknown.
Answers default_answers(const Ruleset& rs);

/// rent = size * base * (deviations + 100) * 0.01 * (imprecision + 100) * 0.01 + fixed costs,
/// evaluated as interval constraints over whatever the answers pin down.
RentEstimate estimate(const Answers& answers, const Ruleset& rs);

/// Re-applies the rent formula to a breakdown with interval arithmetic.
Interval recombine(const RentBreakdown& breakdown);

class RefineError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Merges a refinement into previous answers. Fields present in delta must
/// narrow (or repeat) the previous value; Unknown flags in delta keep the
/// previous state. Throws RefineError("refinement must narrow: ...").
Answers refine(const Answers& previous, const Answers& delta);

}  // namespace rentbound
