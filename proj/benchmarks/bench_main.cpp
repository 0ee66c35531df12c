#include <benchmark/benchmark.h>

#include "mpsdfe/device.hpp"
#include "mpsdfe/grouping.hpp"
#include "mpsdfe/mpo_engine.hpp"
#include "mpsdfe/sampler.hpp"

using namespace mpsdfe;

namespace {

Mps target(std::size_t n, Index bond) { return canonicalize_right(normalize(random_mps(n, bond, 7))); }

void BM_SampleSetting(benchmark::State& state) {
  const Mps mps = target(state.range(0), state.range(1));
  std::uint64_t k = 0;
  for (auto _ : state) {
    Stream rng(stream_key(1, Phase::Settings, k++));
    benchmark::DoNotOptimize(sample_setting(mps, rng));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SampleSetting)->ArgsProduct({{16, 32, 64, 128}, {8}})->Complexity(benchmark::oN);
BENCHMARK(BM_SampleSetting)->ArgsProduct({{32}, {2, 4, 8, 16}});

void BM_GroupWeight(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Mps mps = target(n, state.range(1));
  Stream rng(3);
  const auto g = SortingString::uniform(n, rng);
  const auto rep = representative(sample_setting(mps, rng).pauli, g);
  for (auto _ : state) benchmark::DoNotOptimize(group_weight(mps, rep, g));
}
BENCHMARK(BM_GroupWeight)->ArgsProduct({{32}, {2, 4, 8, 16}});

void BM_GroupWeightMpo(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto gamma = prepare_mpo(random_hermitian_mpo(n, state.range(1) / 2, 7));
  Stream rng(3);
  const auto g = SortingString::uniform(n, rng);
  const auto rep = representative(sample_setting_mpo(gamma, rng).pauli, g);
  for (auto _ : state) benchmark::DoNotOptimize(group_weight_mpo(gamma, rep, g));
}
BENCHMARK(BM_GroupWeightMpo)->ArgsProduct({{32}, {4, 8, 16}});

// Snapshot evaluation per measured shot, all shots distinct.
void BM_SnapshotPerShot(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Mps mps = target(n, 8);
  Stream rng(5);
  SampledSetting latent = sample_setting(mps, rng);
  const auto grouped = make_grouped_setting(mps, latent, SortingString::uniform(n, rng), PrecisionParams{});
  const DeviceModel device(mps, 1.0);
  const auto hist = measure_counts(device, grouped.representative, 256, 11);
  for (auto _ : state) benchmark::DoNotOptimize(snapshot_values(mps, grouped, hist));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(hist.size()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SnapshotPerShot)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Complexity(benchmark::oN);

void BM_MeasureCounts(benchmark::State& state) {
  const Mps mps = target(12, 4);
  const auto setting = PauliString::parse("XYZXYZXYZXYZ");
  const DeviceModel device(mps, 0.1);
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(measure_counts(device, setting, state.range(0), k++));
}
BENCHMARK(BM_MeasureCounts)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
