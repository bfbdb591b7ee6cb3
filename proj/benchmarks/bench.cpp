#include <random>

#include <benchmark/benchmark.h>

#include "riskweave/pipeline.hpp"
#include "riskweave/priority.hpp"
#include "riskweave/store.hpp"
#include "riskweave/supermatrix.hpp"

using namespace riskweave;

namespace {

ComparisonMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  static const int kScale[] = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 16);
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("e" + std::to_string(i));
  std::vector<Rational> upper;
  for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) {
    const int k = pick(rng);
    upper.push_back(k < 9 ? Rational(kScale[k]) : Rational(1, kScale[k - 8]));
  }
  return ComparisonMatrix("bench", std::move(ids), std::move(upper));
}

void BM_PrincipalEigenvector(benchmark::State& state) {
  const ComparisonMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(principal_eigenvector(m));
}
BENCHMARK(BM_PrincipalEigenvector)->Arg(3)->Arg(6)->Arg(9)->Arg(15);

void BM_FixtureLimit(benchmark::State& state) {
  const ModelDocument& model = bundled_model();
  const PipelineResult r = run_pipeline(model, model.judgments());
  for (auto _ : state) benchmark::DoNotOptimize(limit(r.weighted));
}
BENCHMARK(BM_FixtureLimit);

void BM_FixturePipeline(benchmark::State& state) {
  const ModelDocument& model = bundled_model();
  const auto judgments = model.judgments();
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(model, judgments));
}
BENCHMARK(BM_FixturePipeline);

}  // namespace

BENCHMARK_MAIN();
