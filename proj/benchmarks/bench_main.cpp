#include "rentbound/constraint_store.hpp"
#include "rentbound/estimate.hpp"
#include "rentbound/form_codec.hpp"
#include "rentbound/http_handler.hpp"
#include "rentbound/log_analyzer.hpp"
#include "rentbound/table.hpp"

#include <benchmark/benchmark.h>

#include <sstream>

using namespace rentbound;

namespace {

const Ruleset& sample() {
  static const Ruleset rs = load_ruleset_file(RENTBOUND_SAMPLE_RULESET);
  return rs;
}

Interval iv(long long lo, long long hi) { return Interval(Rational(lo), Rational(hi)); }

void BM_LookupPoint(benchmark::State& state) {
  const Table& t = sample().deviation_tables.front().table;
  const std::vector<Interval> q{iv(1980, 1980), iv(2, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(lookup_hull(t, q));
}
BENCHMARK(BM_LookupPoint);

void BM_LookupRange(benchmark::State& state) {
  const Table& t = sample().base_rent.table;
  const std::vector<Interval> q{iv(22, 160), iv(1800, 1992), iv(1, 3)};
  for (auto _ : state) benchmark::DoNotOptimize(lookup_hull(t, q));
}
BENCHMARK(BM_LookupRange);

void BM_PropagateChain(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    ConstraintStore s;
    std::vector<VarId> xs;
    for (long long i = 0; i < n; ++i) {
      xs.emplace_back("x" + std::to_string(i));
      s.declare(xs.back(), iv(0, 10 * n));
    }
    for (long long i = 0; i + 1 < n; ++i) s.post_ordering({xs[i], Relation::LT, xs[i + 1]});
    s.propagate();
    benchmark::DoNotOptimize(s.consistent());
  }
}
BENCHMARK(BM_PropagateChain)->Arg(8)->Arg(32)->Arg(128);

void BM_EstimateBlank(benchmark::State& state) {
  const Answers a = default_answers(sample());
  for (auto _ : state) benchmark::DoNotOptimize(estimate(a, sample()));
}
BENCHMARK(BM_EstimateBlank);

void BM_EstimateGround(benchmark::State& state) {
  Answers a = default_answers(sample());
  a.size = Interval::point(Rational(80));
  a.rooms = Interval::point(Rational(3));
  a.year = Interval::point(Rational(1970));
  a.district = "Schwabing";
  for (const auto& q : sample().flags) {
    (q.group == FlagGroup::house ? a.house_flags : a.flat_flags)[q.id] = TriState::Yes;
  }
  for (auto _ : state) benchmark::DoNotOptimize(estimate(a, sample()));
}
BENCHMARK(BM_EstimateGround);

void BM_HandlePost(benchmark::State& state) {
  const std::string body = "Language=English&M2_min=76&M2_max=85&District=Bogenhausen&BackPremises=%3F";
  const std::string request = "POST / HTTP/1.0\r\nContent-Type: application/x-www-form-urlencoded\r\nContent-Length: " +
                              std::to_string(body.size()) + "\r\n\r\n" + body;
  for (auto _ : state) benchmark::DoNotOptimize(handle(request, sample()));
}
BENCHMARK(BM_HandlePost);

void BM_AggregateLines(benchmark::State& state) {
  std::ostringstream log;
  for (int i = 0; i < 1000; ++i) {
    log << "1996-11-1" << i % 10 << "T1" << i % 10 << ":00:00Z\tok\tpc" << i << ".cs.tu-muenchen.de\t"
        << "Mozilla/3.0 (X11; I; SunOS 5.5 sun4m)\tGerman\n";
  }
  const std::string text = log.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(aggregate(in));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_AggregateLines);

}  // namespace

BENCHMARK_MAIN();
