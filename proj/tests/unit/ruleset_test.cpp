#include "rentbound/ruleset.hpp"

#include "test_data.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace rentbound;
using rentbound::testing::sample_ruleset_path;

namespace {

std::string sample_text() {
  std::ifstream in(sample_ruleset_path());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Interval iv(const char* lo, const char* hi) { return Interval(parse_decimal(lo), parse_decimal(hi)); }

}  // namespace

TEST(Ruleset, SampleLoads) {
  const Ruleset rs = load_ruleset_file(sample_ruleset_path());
  EXPECT_EQ(rs.meta.currency, "DM");
  EXPECT_EQ(rs.ranges.size, iv("22", "160"));
  EXPECT_EQ(rs.ranges.rooms, iv("1", "9"));
  EXPECT_EQ(rs.ranges.year, iv("1800", "1992"));
  EXPECT_EQ(rs.flags_in(FlagGroup::house).size(), 6u);
  EXPECT_EQ(rs.flags_in(FlagGroup::flat).size(), 13u);
  ASSERT_NE(rs.find_district("Bogenhausen"), nullptr);
  ASSERT_NE(rs.find_district("Schwabing"), nullptr);
  EXPECT_NE(rs.find_flag("BackPremises"), nullptr);
  EXPECT_TRUE(rs.warnings.empty());
  const Interval dev = total_deviation_range(rs);
  EXPECT_GE(dev.lo(), -60);
  EXPECT_LE(dev.hi(), 60);
}

TEST(Ruleset, SampleContainsReferenceRows) {
  const Ruleset rs = load_ruleset_file(sample_ruleset_path());
  ASSERT_EQ(rs.deviation_tables.size(), 1u);
  const Table& t = rs.deviation_tables[0].table;
  const struct {
    const char *ylo, *yhi, *rlo, *rhi, *value;
  } rows[] = {{"1966", "1977", "1", "1", "-3.5"}, {"1966", "1977", "2", "3", "-2.0"}, {"1966", "1977", "4", "9", "-3.0"},
              {"1978", "1983", "1", "1", "2.0"},  {"1978", "1983", "2", "3", "10.0"}, {"1978", "1983", "4", "9", "3.0"},
              {"1984", "1986", "1", "1", "6.0"},  {"1984", "1986", "2", "3", "18.0"}, {"1984", "1986", "4", "9", "7.0"}};
  for (const auto& r : rows) {
    bool found = false;
    for (const auto& f : t.facts) {
      found |= f.keys[0] == iv(r.ylo, r.yhi) && f.keys[1] == iv(r.rlo, r.rhi) && f.value == parse_decimal(r.value);
    }
    EXPECT_TRUE(found) << r.ylo << "-" << r.yhi << " rooms " << r.rlo << ":" << r.rhi;
  }
}

TEST(Ruleset, MissingBaseRentIsAnError) {
  std::string text = sample_text();
  const auto pos = text.find("\"role\": \"base_rent\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 19, "\"role\": \"deviation\"");
  EXPECT_THROW(parse_ruleset(text), RulesetError);
}

TEST(Ruleset, ExcessiveDeviationWarns) {
  std::string text = sample_text();
  const std::string from = "\"yes\": \"-3.0\"";
  const auto pos = text.find(from);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, from.size(), "\"yes\": \"-40.0\"");
  const Ruleset rs = parse_ruleset(text);
  ASSERT_FALSE(rs.warnings.empty());
  EXPECT_NE(rs.warnings.back().find("60"), std::string::npos);
}

TEST(Ruleset, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_ruleset("not json"), RulesetError);
  EXPECT_THROW(parse_ruleset("[]"), RulesetError);
  std::string text = sample_text();
  text.insert(1, "\"extra\": 1,");
  EXPECT_THROW(parse_ruleset(text), RulesetError);
  std::string numeric = sample_text();
  const auto pos = numeric.find("\"size\": [\"22\"");
  numeric.replace(pos, 13, "\"size\": [22");
  EXPECT_THROW(parse_ruleset(numeric), RulesetError);
  EXPECT_THROW(load_ruleset_file("/nonexistent/ruleset.json"), RulesetError);
}

TEST(Ruleset, BaseRentGapRefusesLoad) {
  std::string text = sample_text();
  // Shrink the last base-rent fact so size 160 is uncovered.
  const std::string from = "[\"101\", \"160\"]";
  const auto pos = text.rfind(from);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, from.size(), "[\"101\", \"150\"]");
  EXPECT_THROW(parse_ruleset(text), RulesetError);
}
