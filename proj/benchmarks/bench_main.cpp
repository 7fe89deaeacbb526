#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "scisent/agreement.hpp"
#include "scisent/levenshtein.hpp"
#include "scisent/metrics.hpp"

namespace {

std::string random_text(std::mt19937_64& rng, std::size_t n) {
  std::string s(n, ' ');
  for (auto& c : s) c = static_cast<char>('a' + rng() % 26);
  return s;
}

void BM_NormalizedLevenshtein(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::string a = random_text(rng, n), b = random_text(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(scisent::normalized_levenshtein(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NormalizedLevenshtein)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNSquared);

// One gated candidate against an original and three siblings.
void BM_GateFiveComparisons(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<std::string> texts;
  for (int i = 0; i < 5; ++i) texts.push_back(random_text(rng, 180));
  for (auto _ : state) {
    double sum = 0;
    for (int i = 1; i < 5; ++i) sum += scisent::normalized_levenshtein(texts[0], texts[i]);
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_GateFiveComparisons);

void BM_EvaluateTestSplit(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<scisent::Category> gold;
  std::vector<std::optional<scisent::Category>> pred;
  for (std::size_t i = 0; i < n; ++i) {
    gold.push_back(scisent::all_categories()[rng() % 7]);
    pred.push_back(scisent::all_categories()[rng() % 7]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(scisent::evaluate(gold, pred, "b", scisent::Split::Test));
}
BENCHMARK(BM_EvaluateTestSplit)->Arg(140)->Arg(10000);

void BM_FleissAndAc1(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto items = static_cast<std::size_t>(state.range(0));
  std::vector<std::string> ids;
  std::vector<std::vector<int>> counts;
  for (std::size_t i = 0; i < items; ++i) {
    ids.push_back(std::to_string(i));
    std::vector<int> row(7, 0);
    for (int r = 0; r < 3; ++r) ++row[rng() % 7];
    counts.push_back(row);
  }
  const scisent::RatingMatrix m(ids, 3, counts);
  for (auto _ : state) benchmark::DoNotOptimize(scisent::agreement_report(m));
}
BENCHMARK(BM_FleissAndAc1)->Arg(140)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
