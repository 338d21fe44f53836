#pragma once

#include "rentbound/estimate.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rentbound {

/// Decoded form fields in arrival order; duplicates are kept.
using FieldMap = std::vector<std::pair<std::string, std::string>>;

enum class FormErrc {
  malformed_escape,
  integer_required,
  decimal_required,
  wrong_interval,
  out_of_range,
  unknown_district,
  invalid_choice,
};

std::string_view to_string(FormErrc code);

class FormError : public std::runtime_error {
 public:
  FormError(FormErrc code, const std::string& field, const std::string& what)
      : std::runtime_error(what), code_(code), field_(field) {}
  FormErrc code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  FormErrc code_;
  std::string field_;
};

/// application/x-www-form-urlencoded. Splits on '&' then on the first '=';
/// '+' is a space, %XX accepts either hex case, a name without '=' has an
/// empty value. Bytes are read as Latin-1 and returned as UTF-8.
/// Throws FormError(malformed_escape) on a bad escape.
FieldMap decode_body(std::string_view body);

/// UTF-8 text to Latin-1 form encoding ('+' for space, %XX for the rest).
/// Code points beyond Latin-1 are sent as '?'.
std::string form_escape(std::string_view utf8);
std::string encode_fields(const FieldMap& fields);

enum class FieldKind { integer_min, integer_max, decimal_min, decimal_max, district, tristate, language };

enum class FieldSection { basic, district, house, flat, fixed_costs, meta };

struct FieldSpec {
  std::string name;
  FieldKind kind;
  FieldSection section;
  /// Allowed range for numeric kinds.
  std::optional<Interval> bounds;
  /// The other half of a min/max pair.
  std::string partner;
  /// Answer slot: "size", "rooms", "year", a question id or a fixed-cost id.
  std::string target;
  std::string label;
  std::string label_de;
};

using FieldSchema = std::vector<FieldSpec>;

/// Form vocabulary for a ruleset: M2_min/M2_max, ZI_min/ZI_max,
/// BJ_min/BJ_max, District, Language, one field per question id and
/// NK_<id>_min/NK_<id>_max per fixed-cost item.
FieldSchema make_schema(const Ruleset& rs);
const FieldSpec* find_field(const FieldSchema& schema, std::string_view name);

struct BoundForm {
  Answers answers;
  std::string language;
  std::vector<std::string> warnings;
};

/// Maps fields onto Answers. Missing, empty or "?" fields stay Unknown; a
/// pair with one half missing takes the allowed bound for the other half.
/// Repeated fields: last one wins (warned). Unknown names: ignored (warned).
/// Throws FormError for non-integers, min > max, out-of-range values,
/// unknown districts and invalid choices.
BoundForm bind_fields(const FieldMap& fields, const FieldSchema& schema, const Ruleset& rs);

/// Inverse of bind_fields for valid answers: Unknown flags, missing
/// intervals and a missing district are omitted.
std::string encode_answers(const Answers& answers, const FieldSchema& schema);

}  // namespace rentbound
