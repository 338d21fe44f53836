#include "rentbound/estimate.hpp"

#include "rentbound/constraint_store.hpp"

namespace rentbound {

TriState Answers::flag(const std::string& id) const {
  if (auto it = house_flags.find(id); it != house_flags.end()) return it->second;
  if (auto it = flat_flags.find(id); it != flat_flags.end()) return it->second;
  return TriState::Unknown;
}

Answers default_answers(const Ruleset& rs) {
  Answers a;
  a.size = rs.ranges.size;
  a.rooms = rs.ranges.rooms;
  a.year = rs.ranges.year;
  for (const auto& q : rs.flags) {
    (q.group == FlagGroup::house ? a.house_flags : a.flat_flags)[q.id] = TriState::Unknown;
  }
  return a;
}

namespace {

Interval restrict(const std::optional<Interval>& answer, const Interval& allowed, const char* what) {
  if (!answer) return allowed;
  auto inter = intersect(*answer, allowed);
  if (!inter) {
    throw EstimateError(EstimateErrc::out_of_domain,
                        std::string("out of domain: ") + what + " " + to_string(*answer) +
                            " outside allowed " + to_string(allowed));
  }
  return *inter;
}

Interval lookup(const BoundTable& bt, const std::map<KeySource, Interval>& inputs) {
  std::vector<Interval> query;
  query.reserve(bt.sources.size());
  for (KeySource s : bt.sources) query.push_back(inputs.at(s));
  try {
    return lookup_hull(bt.table, query);
  } catch (const TableError& e) {
    throw EstimateError(EstimateErrc::no_table_entry, e.what());
  }
}

Interval flag_deviation(const FlagQuestion& q, TriState state) {
  switch (state) {
    case TriState::Yes: return Interval::point(q.yes_percent);
    case TriState::No: return Interval::point(q.no_percent);
    case TriState::Unknown: break;
  }
  return hull(Interval::point(q.yes_percent), Interval::point(q.no_percent));
}

const VarId kSize{"size"};
const VarId kRooms{"rooms"};
const VarId kYear{"year"};
const VarId kCategory{"district_category"};
const VarId kBase{"base_rent_per_m2"};
const VarId kDeviationSum{"deviation_sum"};
const VarId kDeviationFactor{"deviation_factor"};
const VarId kImprecision{"imprecision"};
const VarId kImprecisionFactor{"imprecision_factor"};
const VarId kNetRent{"net_rent"};
const VarId kFixedCosts{"fixed_costs"};
const VarId kRent{"rent"};

// Wide enough for any derived quantity; the constraints narrow it.
Interval unbounded() {
  const Rational big = Rational(1'000'000'000'000LL);
  return Interval(-big, big);
}

}  // namespace

RentEstimate estimate(const Answers& answers, const Ruleset& rs) {
  RentEstimate result{Interval::point(0),
                      RentBreakdown{Interval::point(0), Interval::point(0), {}, Interval::point(0),
                                    Interval::point(0), Interval::point(0)},
                      false,
                      {}};

  const Interval size = restrict(answers.size, rs.ranges.size, "size");
  const Interval rooms = restrict(answers.rooms, rs.ranges.rooms, "rooms");
  const Interval year = restrict(answers.year, rs.ranges.year, "year");
  Interval category = rs.category_range();
  if (answers.district) {
    const District* d = rs.find_district(*answers.district);
    if (!d) {
      throw EstimateError(EstimateErrc::unknown_district,
                          "unknown district '" + *answers.district + "'");
    }
    category = Interval::point(d->category);
  }
  const std::map<KeySource, Interval> inputs{{KeySource::size, size},
                                             {KeySource::rooms, rooms},
                                             {KeySource::year, year},
                                             {KeySource::district_category, category}};

  ConstraintStore store;
  store.declare(kSize, size);
  store.declare(kRooms, rooms);
  store.declare(kYear, year);
  store.declare(kCategory, category);
  store.declare(kBase, lookup(rs.base_rent, inputs));

  SumConstraint deviation_sum{Interval::point(0), {}, kDeviationSum};
  for (const auto& bt : rs.deviation_tables) {
    const VarId v("table:" + bt.table.name);
    store.declare(v, lookup(bt, inputs));
    deviation_sum.terms.push_back({1, v});
    result.breakdown.deviations.push_back(
        {bt.table.name, bt.label.empty() ? bt.table.name : bt.label, bt.label_de, store.domain(v)});
  }
  bool all_flags_known = true;
  for (const auto& q : rs.flags) {
    const TriState state = answers.flag(q.id);
    all_flags_known &= state != TriState::Unknown;
    const VarId v("flag:" + q.id);
    store.declare(v, flag_deviation(q, state));
    deviation_sum.terms.push_back({1, v});
    result.breakdown.deviations.push_back(
        {q.id, q.label.empty() ? q.id : q.label, q.label_de, store.domain(v)});
  }
  for (const auto& [id, _] : answers.house_flags) {
    if (!rs.find_flag(id)) result.warnings.push_back("unknown question '" + id + "' ignored");
  }
  for (const auto& [id, _] : answers.flat_flags) {
    if (!rs.find_flag(id)) result.warnings.push_back("unknown question '" + id + "' ignored");
  }
  store.declare(kDeviationSum, unbounded());
  store.post_sum(std::move(deviation_sum));

  // (deviations + 100) * 0.01 == 1 + deviations / 100
  store.declare(kDeviationFactor, unbounded());
  store.post_sum({Interval::point(1), {{Rational(1, 100), kDeviationSum}}, kDeviationFactor});

  if (const auto* constant = std::get_if<Interval>(&rs.imprecision)) {
    store.declare(kImprecision, *constant);
  } else {
    store.declare(kImprecision, lookup(std::get<BoundTable>(rs.imprecision), inputs));
  }
  store.declare(kImprecisionFactor, unbounded());
  store.post_sum({Interval::point(1), {{Rational(1, 100), kImprecision}}, kImprecisionFactor});

  store.declare(kNetRent, unbounded());
  store.post_mul({Interval::point(1), {kSize, kBase, kDeviationFactor, kImprecisionFactor}, kNetRent});

  SumConstraint fixed{Interval::point(0), {}, kFixedCosts};
  bool all_costs_known = true;
  for (const auto& item : rs.fixed_costs) {
    const VarId v("cost:" + item.id);
    auto it = answers.fixed_costs.find(item.id);
    if (it != answers.fixed_costs.end()) {
      const std::string what = "fixed cost '" + item.id + "'";
      const Interval supplied = restrict(it->second, Interval(item.min, item.max), what.c_str());
      store.declare(v, supplied);
      all_costs_known &= supplied.is_singleton();
    } else {
      store.declare(v, Interval(item.min, item.max));
      all_costs_known = false;
    }
    fixed.terms.push_back({1, v});
  }
  for (const auto& [id, _] : answers.fixed_costs) {
    if (!rs.find_fixed_cost(id)) result.warnings.push_back("unknown fixed-cost item '" + id + "' ignored");
  }
  store.declare(kFixedCosts, unbounded());
  store.post_sum(std::move(fixed));

  store.declare(kRent, unbounded());
  store.post_sum({Interval::point(0), {{1, kNetRent}, {1, kFixedCosts}}, kRent});

  store.propagate();
  if (!store.consistent()) {
    throw EstimateError(EstimateErrc::inconsistent_answers, "inconsistent answers");
  }

  result.rent = store.domain(kRent);
  result.breakdown.size = store.domain(kSize);
  result.breakdown.base_rent_per_m2 = store.domain(kBase);
  result.breakdown.deviation_sum = store.domain(kDeviationSum);
  result.breakdown.imprecision = store.domain(kImprecision);
  result.breakdown.fixed_costs = store.domain(kFixedCosts);
  result.complete = size.is_singleton() && rooms.is_singleton() && year.is_singleton() &&
                    answers.district.has_value() && all_flags_known && all_costs_known;
  return result;
}

Interval recombine(const RentBreakdown& b) {
  const Interval hundred = Interval::point(100);
  const Interval percent = Interval::point(Rational(1, 100));
  return b.size * b.base_rent_per_m2 * ((b.deviation_sum + hundred) * percent) *
             ((b.imprecision + hundred) * percent) +
         b.fixed_costs;
}

namespace {

void refine_interval(std::optional<Interval>& target, const std::optional<Interval>& delta,
                     const std::string& what) {
  if (!delta) return;
  if (target && !target->contains(*delta)) {
    throw RefineError("refinement must narrow: " + what + " " + to_string(*target) + " -> " +
                      to_string(*delta));
  }
  target = delta;
}

void refine_flags(std::map<std::string, TriState>& target,
                  const std::map<std::string, TriState>& delta) {
  for (const auto& [id, state] : delta) {
    if (state == TriState::Unknown) continue;
    auto [it, inserted] = target.emplace(id, state);
    if (inserted) continue;
    if (it->second != TriState::Unknown && it->second != state) {
      throw RefineError("refinement must narrow: question '" + id + "' already answered");
    }
    it->second = state;
  }
}

}  // namespace

Answers refine(const Answers& previous, const Answers& delta) {
  Answers merged = previous;
  refine_interval(merged.size, delta.size, "size");
  refine_interval(merged.rooms, delta.rooms, "rooms");
  refine_interval(merged.year, delta.year, "year");
  if (delta.district) {
    if (merged.district && *merged.district != *delta.district) {
      throw RefineError("refinement must narrow: district already set to '" + *merged.district + "'");
    }
    merged.district = delta.district;
  }
  refine_flags(merged.house_flags, delta.house_flags);
  refine_flags(merged.flat_flags, delta.flat_flags);
  for (const auto& [id, iv] : delta.fixed_costs) {
    auto it = merged.fixed_costs.find(id);
    if (it == merged.fixed_costs.end()) {
      merged.fixed_costs.emplace(id, iv);
      continue;
    }
    if (!it->second.contains(iv)) {
      throw RefineError("refinement must narrow: fixed cost '" + id + "' " + to_string(it->second) +
                        " -> " + to_string(iv));
    }
    it->second = iv;
  }
  return merged;
}

}  // namespace rentbound
