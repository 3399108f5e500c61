// Serial reference vs OpenMP runner on the 168-test reference suite.
#include <benchmark/benchmark.h>

#include "bditb/harness.hpp"

namespace {

const std::vector<bditb::harness::SuiteTest>& suite() {
  static const auto tests = bditb::harness::paper_suite_tests(bditb::testgen::paper_suite());
  return tests;
}

void BM_serial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(bditb::harness::run_suite_serial(suite(), {}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(suite().size()));
}

void BM_parallel(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bditb::harness::run_suite_parallel(suite(), {}, jobs));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(suite().size()));
}

void BM_generate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bditb::testgen::paper_suite());
}

}  // namespace

BENCHMARK(BM_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_generate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
