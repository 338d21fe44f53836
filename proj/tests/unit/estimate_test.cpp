#include "rentbound/estimate.hpp"

#include "random_answers.hpp"
#include "test_data.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rentbound;
using rentbound::testing::sample_ruleset_path;

namespace {

Interval iv(long long lo, long long hi) { return Interval(Rational(lo), Rational(hi)); }
Rational dec(const char* s) { return parse_decimal(s); }

const Ruleset& sample() {
  static const Ruleset rs = load_ruleset_file(sample_ruleset_path());
  return rs;
}

// One base rent, one constant deviation, constant imprecision, no costs.
Ruleset flat_ruleset(const char* base, const char* deviation, const char* imprecision) {
  const std::string doc = std::string(R"({
    "meta": {"city": "Test", "edition": 1, "currency": "DM"},
    "ranges": {"size": ["22", "160"], "rooms": ["1", "9"], "year": ["1800", "1992"]},
    "districts": [{"name": "Mitte", "category": "1"}],
    "tables": [
      {"name": "base", "role": "base_rent",
       "keys": [{"name": "size", "source": "size"}],
       "facts": [[["22", "160"], ")") + base + R"("]]},
      {"name": "dev", "role": "deviation",
       "keys": [{"name": "year", "source": "year"}],
       "facts": [[["1800", "1992"], ")" + deviation + R"("]]}
    ],
    "flags": {"house": [], "flat": []},
    "imprecision": {"constant": ["-)" + imprecision + R"(", ")" + imprecision + R"("]},
    "fixed_costs": []
  })";
  return parse_ruleset(doc);
}

// The rent formula evaluated at interval endpoints, independent of the store.
Interval formula_endpoints(const Rational& size, const Rational& base, const Rational& dev, const Interval& imp) {
  std::vector<Rational> values;
  for (const Rational& i : {imp.lo(), imp.hi()}) {
    values.push_back(size * base * (dev + 100) / 100 * (i + 100) / 100);
  }
  return Interval(std::min(values[0], values[1]), std::max(values[0], values[1]));
}

}  // namespace

TEST(Estimate, WorkedFormulaCase) {
  const Ruleset rs = flat_ruleset("10.00", "-2", "10");
  Answers a = default_answers(rs);
  a.size = Interval::point(Rational(80));
  const RentEstimate est = estimate(a, rs);
  const Interval oracle = formula_endpoints(80, dec("10.00"), -2, iv(-10, 10));
  EXPECT_EQ(est.rent, oracle);
  EXPECT_EQ(format_fixed(est.rent.lo(), 2), "705.60");
  EXPECT_EQ(format_fixed(est.rent.hi(), 2), "862.40");
  EXPECT_EQ(recombine(est.breakdown), est.rent);
}

TEST(Estimate, DefaultAnswers) {
  const Answers a = default_answers(sample());
  EXPECT_EQ(a.size, iv(22, 160));
  EXPECT_EQ(a.rooms, iv(1, 9));
  EXPECT_EQ(a.year, iv(1800, 1992));
  EXPECT_FALSE(a.district);
  EXPECT_EQ(a.house_flags.size() + a.flat_flags.size(), sample().flags.size());
  for (const auto& [id, s] : a.house_flags) EXPECT_EQ(s, TriState::Unknown) << id;
  for (const auto& [id, s] : a.flat_flags) EXPECT_EQ(s, TriState::Unknown) << id;
}

TEST(Estimate, BlankFormIsGlobalInterval) {
  const RentEstimate blank = estimate(default_answers(sample()), sample());
  EXPECT_FALSE(blank.complete);
  EXPECT_EQ(estimate(Answers{}, sample()).rent, blank.rent);
  // Extremes from the ruleset data directly.
  Rational base_lo = sample().base_rent.table.facts[0].value, base_hi = base_lo;
  for (const auto& f : sample().base_rent.table.facts) {
    base_lo = std::min(base_lo, f.value);
    base_hi = std::max(base_hi, f.value);
  }
  const Interval dev = total_deviation_range(sample());
  Rational cost_lo = 0, cost_hi = 0;
  for (const auto& c : sample().fixed_costs) {
    cost_lo += c.min;
    cost_hi += c.max;
  }
  const Rational lo = Rational(22) * base_lo * (dev.lo() + 100) / 100 * Rational(90, 100) + cost_lo;
  const Rational hi = Rational(160) * base_hi * (dev.hi() + 100) / 100 * Rational(110, 100) + cost_hi;
  EXPECT_EQ(blank.rent, Interval(lo, hi));
}

TEST(Estimate, TableFactorContribution) {
  Answers a = default_answers(sample());
  a.year = iv(1980, 1985);
  a.rooms = iv(1, 3);
  const RentEstimate est = estimate(a, sample());
  ASSERT_FALSE(est.breakdown.deviations.empty());
  EXPECT_EQ(est.breakdown.deviations[0].id, "age_rooms");
  EXPECT_EQ(est.breakdown.deviations[0].percent, Interval(dec("2.0"), dec("18.0")));
}

TEST(Estimate, GroundAnswersAreComplete) {
  std::mt19937 rng(3);
  const auto chain = rentbound::testing::random_refinement_chain(sample(), rng);
  const RentEstimate est = estimate(chain.back(), sample());
  EXPECT_TRUE(est.complete);
  EXPECT_TRUE(est.rent.is_singleton() || est.breakdown.imprecision.width() > 0);
  EXPECT_EQ(recombine(est.breakdown), est.rent);
}

TEST(Estimate, Errors) {
  Answers a;
  a.size = iv(200, 300);
  try {
    estimate(a, sample());
    FAIL();
  } catch (const EstimateError& e) {
    EXPECT_EQ(e.code(), EstimateErrc::out_of_domain);
  }
  Answers b;
  b.district = "Atlantis";
  try {
    estimate(b, sample());
    FAIL();
  } catch (const EstimateError& e) {
    EXPECT_EQ(e.code(), EstimateErrc::unknown_district);
  }
  Answers c;
  c.fixed_costs.insert_or_assign("Tax", iv(100, 200));
  EXPECT_THROW(estimate(c, sample()), EstimateError);
}

TEST(Estimate, UnknownIdsWarn) {
  Answers a;
  a.house_flags["Moat"] = TriState::Yes;
  const RentEstimate est = estimate(a, sample());
  ASSERT_EQ(est.warnings.size(), 1u);
  EXPECT_NE(est.warnings[0].find("Moat"), std::string::npos);
}

TEST(Estimate, RefinementChainsAreNested) {
  std::mt19937 rng(2024);
  const RentEstimate blank = estimate(default_answers(sample()), sample());
  for (int n = 0; n < 40; ++n) {
    const auto chain = rentbound::testing::random_refinement_chain(sample(), rng);
    Interval prev = blank.rent;
    for (const auto& a : chain) {
      const Interval cur = estimate(a, sample()).rent;
      ASSERT_TRUE(prev.contains(cur)) << to_string(prev) << " vs " << to_string(cur);
      prev = cur;
    }
    EXPECT_FALSE(prev == blank.rent);
  }
}

TEST(Estimate, GroundEstimatesInsidePartial) {
  // Small slice of the ground-soundness grid; the acceptance run covers all of it.
  const Ruleset& rs = sample();
  Answers partial = default_answers(rs);
  partial.size = iv(50, 100);
  partial.district = "Schwabing";
  const RentEstimate p = estimate(partial, rs);
  for (long long size : {50, 77, 100}) {
    for (long long rooms = 1; rooms <= 9; rooms += 4) {
      Answers g = partial;
      g.size = Interval::point(Rational(size));
      g.rooms = Interval::point(Rational(rooms));
      g.year = Interval::point(Rational(1970));
      for (const auto& q : rs.flags) (q.group == FlagGroup::house ? g.house_flags : g.flat_flags)[q.id] = TriState::Yes;
      EXPECT_TRUE(p.rent.contains(estimate(g, rs).rent));
    }
  }
}

TEST(Refine, MergesAndRejectsWidening) {
  Answers a = default_answers(sample());
  Answers d;
  d.house_flags["Lift"] = TriState::Yes;
  d.size = iv(76, 85);
  const Answers r = refine(a, d);
  EXPECT_EQ(r.flag("Lift"), TriState::Yes);
  EXPECT_EQ(r.size, iv(76, 85));
  Answers wider;
  wider.size = iv(22, 160);
  EXPECT_THROW(refine(r, wider), RefineError);
  Answers flip;
  flip.house_flags["Lift"] = TriState::No;
  EXPECT_THROW(refine(r, flip), RefineError);
}
