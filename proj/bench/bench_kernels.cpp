// Wall-time comparison of the OpenMP kernels against their serial modes
// and the independent reference implementations. Numeric equality of the
// compared variants is covered by the unit tests; this target only
// measures speed.
#include <benchmark/benchmark.h>

#include "qpath/bayesnet.hpp"
#include "qpath/povm.hpp"
#include "qpath/protocol.hpp"
#include "qpath/reference.hpp"
#include "../tests/test_support.hpp"

namespace {

using namespace qpath;

Scenario make_scenario(int d, int nt) {
  qtest::Rng rng(9000 + 17 * d + nt);
  return qtest::random_scenario(rng, d, nt);
}

void BM_joint_parallel(benchmark::State& state) {
  Scenario sc = make_scenario(static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(joint_distribution(sc, Exec::parallel));
}
BENCHMARK(BM_joint_parallel)->Args({4, 3})->Args({4, 5})->Args({8, 3});

void BM_joint_serial(benchmark::State& state) {
  Scenario sc = make_scenario(static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(joint_distribution(sc, Exec::serial));
}
BENCHMARK(BM_joint_serial)->Args({4, 3})->Args({4, 5})->Args({8, 3});

void BM_joint_reference(benchmark::State& state) {
  Scenario sc = make_scenario(static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(ref::joint_distribution(sc));
}
BENCHMARK(BM_joint_reference)->Args({4, 3})->Args({4, 5})->Args({8, 3});

void BM_sample_parallel(benchmark::State& state) {
  Scenario sc = make_scenario(2, 2);
  const std::int64_t shots = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_protocol(sc, shots, 42, Exec::parallel));
}
BENCHMARK(BM_sample_parallel)->Arg(100000)->Arg(1000000);

void BM_sample_serial(benchmark::State& state) {
  Scenario sc = make_scenario(2, 2);
  const std::int64_t shots = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_protocol(sc, shots, 42, Exec::serial));
}
BENCHMARK(BM_sample_serial)->Arg(100000)->Arg(1000000);

void BM_sample_reference(benchmark::State& state) {
  Scenario sc = make_scenario(2, 2);
  const std::int64_t shots = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(ref::sample_protocol(sc, shots, 42));
}
BENCHMARK(BM_sample_reference)->Arg(100000)->Arg(1000000);

void BM_povm_verify_parallel(benchmark::State& state) {
  Scenario sc = make_scenario(static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(verify_povm(sc, Exec::parallel));
}
BENCHMARK(BM_povm_verify_parallel)->Args({3, 3})->Args({4, 3});

void BM_povm_verify_serial(benchmark::State& state) {
  Scenario sc = make_scenario(static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(verify_povm(sc, Exec::serial));
}
BENCHMARK(BM_povm_verify_serial)->Args({3, 3})->Args({4, 3});

void BM_povm_verify_reference(benchmark::State& state) {
  Scenario sc = make_scenario(static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(ref::povm_completeness_defect(sc));
}
BENCHMARK(BM_povm_verify_reference)->Args({3, 3})->Args({4, 3});

}  // namespace

BENCHMARK_MAIN();
