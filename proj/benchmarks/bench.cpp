#include <benchmark/benchmark.h>

#include <algorithm>
#include <map>
#include <random>

#include "metareduce/fragments.hpp"
#include "metareduce/reduction.hpp"
#include "metareduce/resolution.hpp"
#include "metareduce/search.hpp"
#include "metareduce/subsumption.hpp"
#include "metareduce/theory.hpp"

using namespace metareduce;

namespace {

const std::vector<Metarule>& dyadic(std::size_t max_body) {
  static std::map<std::size_t, std::vector<Metarule>> cache;
  auto& v = cache[max_body];
  if (v.empty()) v = enumerate({{1, 2}, max_body, Constraint::Connected});
  return v;
}

void BM_Enumerate(benchmark::State& state) {
  for (auto _ : state) {
    auto v = enumerate({{1, 2}, static_cast<std::size_t>(state.range(0)), Constraint::Connected});
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_Enumerate)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Canonicalize(benchmark::State& state) {
  std::vector<Clause> clauses;
  for (const auto& m : dyadic(4)) clauses.push_back(m.clause());
  std::mt19937 rng(1);
  std::shuffle(clauses.begin(), clauses.end(), rng);
  std::size_t i = 0;
  for (auto _ : state) {
    auto& c = clauses[i++ % clauses.size()];
    std::reverse(c.body.begin(), c.body.end());
    benchmark::DoNotOptimize(canonicalize(c));
  }
}
BENCHMARK(BM_Canonicalize);

void BM_Canonicalize_Witness(benchmark::State& state) {
  auto c = witness_cim(static_cast<unsigned>(state.range(0))).clause();
  for (auto _ : state) benchmark::DoNotOptimize(canonicalize(c));
}
BENCHMARK(BM_Canonicalize_Witness)->Arg(1)->Arg(3)->Arg(6);

void BM_Subsumes(benchmark::State& state) {
  const auto& all = dyadic(4);
  std::mt19937 rng(2);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (auto _ : state) benchmark::DoNotOptimize(subsumes_p(all[pick(rng)], all[pick(rng)]));
}
BENCHMARK(BM_Subsumes);

void BM_Resolve(benchmark::State& state) {
  const auto& all = dyadic(3);
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (auto _ : state) {
    const auto& a = all[pick(rng)];
    benchmark::DoNotOptimize(resolve(a, 0, all[pick(rng)]));
  }
}
BENCHMARK(BM_Resolve);

void BM_Derive_Witness(benchmark::State& state) {
  auto theory = enumerate({{2}, 2, Constraint::Connected});
  auto c = witness_ci();
  for (auto _ : state) {
    DerivationSearch s(theory);
    benchmark::DoNotOptimize(s.derive(c, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_Derive_Witness)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Reduce(benchmark::State& state) {
  const auto& frag = dyadic(static_cast<std::size_t>(state.range(1)));
  auto kind = static_cast<RelationKind>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reduce(frag, {kind, 7}).reduced.size());
}
BENCHMARK(BM_Reduce)
    ->ArgNames({"relation", "max_body"})
    ->Args({0, 3})
    ->Args({1, 3})
    ->Args({2, 3})
    ->Args({0, 4})
    ->Args({1, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
