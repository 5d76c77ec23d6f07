#include <benchmark/benchmark.h>

#include <random>

#include "folner/codes.hpp"
#include "folner/folner.hpp"
#include "folner/groups.hpp"
#include "folner/matching.hpp"
#include "folner/reiter.hpp"
#include "folner/words.hpp"

namespace {

folner::Int pcode(long long p) {
  if (p == 0) return folner::kIdentityCode;
  return folner::encode_word(folner::Word{{0, p}});
}

void BM_EncodePower(benchmark::State& state) {
  folner::Word w{folner::Letter{0, state.range(0)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(folner::encode_word(w));
  }
}
BENCHMARK(BM_EncodePower)->Arg(10)->Arg(1000)->Arg(1000000);

void BM_DecodeRoundTrip(benchmark::State& state) {
  folner::Int code(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(folner::encode_word(folner::decode_word(code)));
  }
}
BENCHMARK(BM_DecodeRoundTrip)->Arg(9)->Arg(1001)->Arg(99999);

void BM_StarGeneral(benchmark::State& state) {
  folner::Int a(9), b(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(folner::star(a, b));
  }
}
BENCHMARK(BM_StarGeneral);

void BM_IntervalDefect(benchmark::State& state) {
  auto z = folner::make_z();
  std::vector<folner::Int> F;
  for (long long p = -state.range(0); p <= state.range(0); ++p) {
    F.push_back(pcode(p));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(folner::defect(*z, F, pcode(1)));
  }
}
BENCHMARK(BM_IntervalDefect)->Arg(10)->Arg(100)->Arg(1000);

void BM_KappaInterval(benchmark::State& state) {
  auto z = folner::make_z();
  folner::ReiterFunction f;
  for (long long p = 0; p < state.range(0); ++p) f.values[pcode(p)] = 1;
  const std::vector<folner::Int> D = {pcode(1), pcode(-1)};
  const long long n = state.range(0) / 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(folner::kappa_verify(*z, n, D, f, 1000000));
  }
}
BENCHMARK(BM_KappaInterval)->Arg(16)->Arg(64)->Arg(256);

void BM_MaximumMatchingRandom(benchmark::State& state) {
  std::mt19937_64 rng(4242);
  folner::BipartiteGraph g;
  g.left = g.right = static_cast<std::size_t>(state.range(0));
  g.adj.resize(g.left);
  for (std::size_t i = 0; i < g.left; ++i) {
    for (std::size_t j = 0; j < g.right; ++j) {
      if (rng() % 8 == 0) g.adj[i].push_back(j);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(folner::maximum_matching(g));
  }
}
BENCHMARK(BM_MaximumMatchingRandom)->Arg(32)->Arg(128)->Arg(512);

void BM_SearchFolnerZ(benchmark::State& state) {
  auto z = folner::make_z();
  const std::vector<folner::Int> D = {pcode(1)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        folner::search_folner(*z, state.range(0), D, 1000000));
  }
}
BENCHMARK(BM_SearchFolnerZ)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
