#pragma once

#include "rentbound/request_log.hpp"

#include <array>
#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

namespace rentbound::testing {

// Reference outcome counts.
inline constexpr std::size_t ref_total = 7188;
inline constexpr std::size_t ref_ok = 5611;
inline constexpr std::size_t ref_wrong = 70;
inline constexpr std::size_t ref_timeout_header = 316;
inline constexpr std::size_t ref_timeout_body = 327;
inline constexpr std::size_t ref_syntax = 864;

// Records with a time stamp; the rest were logged without one.
inline constexpr std::size_t ref_timed = 7073;
inline constexpr std::array<std::size_t, 7> ref_weekdays{1658, 1346, 1037, 1014, 1008, 479, 531};
inline constexpr std::array<std::size_t, 24> ref_hours{119, 64,  22,  20,  10,  15,  12,  111, 225, 404, 441, 607,
                                                       571, 655, 561, 665, 562, 447, 373, 289, 250, 271, 211, 168};
// Extrapolated month counts (sum 7890); scaled down to ref_timed records.
inline constexpr std::array<std::size_t, 12> ref_months{386, 1023, 599, 600, 304, 619, 458, 481, 520, 751, 1282, 867};

/// Deterministic log reproducing the outcome, weekday and hour counts above
/// in local time UTC+01:00. Peers, agents and languages follow the header
/// statistics roughly.
std::vector<RequestRecord> synthetic_log();

void write_log(std::ostream& out, const std::vector<RequestRecord>& records);

}  // namespace rentbound::testing
