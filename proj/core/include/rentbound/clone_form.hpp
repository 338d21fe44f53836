#pragma once

#include "rentbound/form_codec.hpp"
#include "rentbound/html.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rentbound {

class CloneError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CloneOptions {
  std::string action = "/";
  std::string title = "Rent Estimate";
  Language language = Language::English;
};

/// Expands section names ("basic", "district", "house", "flat",
/// "fixed_costs", "all") and completes min/max pairs. Throws CloneError for
/// names that are neither sections nor schema fields.
std::vector<std::string> expand_subset(const FieldSchema& schema, std::span<const std::string> subset);

/// Standalone HTML page with a POST form holding only the requested fields
/// (numeric pairs prefilled with the allowed bounds, tri-state groups with
/// "don't know" selected) plus hidden inputs for `fixed`. An empty subset
/// yields a lone submit button. Fixed values are checked with bind_fields
/// and may throw FormError.
std::string clone_form(const Ruleset& rs, std::span<const std::string> subset, const FieldMap& fixed,
                       const CloneOptions& options = {});

}  // namespace rentbound
