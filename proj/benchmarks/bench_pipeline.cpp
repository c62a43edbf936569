// Throughput of the main stages on synthetic snapshots of growing size.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <map>

#include "ocelforge/classifier.hpp"
#include "ocelforge/gor.hpp"
#include "ocelforge/ocel.hpp"
#include "ocelforge/pipeline.hpp"
#include "ocelforge/plan.hpp"
#include "ocelforge/synth.hpp"

using namespace ocelforge;
namespace fs = std::filesystem;

namespace {

// One snapshot per size, generated on first use under the temp directory.
const fs::path& snapshot(std::size_t orders) {
  static std::map<std::size_t, fs::path> cache;
  auto it = cache.find(orders);
  if (it != cache.end()) return it->second;
  const auto dir = fs::temp_directory_path() / ("ocelforge_bench_" + std::to_string(orders));
  fs::remove_all(dir);
  synth::GenSpec spec;
  spec.n_orders = orders;
  spec.change_rate = 0.3;
  synth::generate(spec, dir);
  return cache.emplace(orders, dir).first->second;
}

std::size_t total_rows(const Catalog& c) {
  std::size_t n = 0;
  for (const auto& [name, t] : c.tables()) n += t.row_count;
  return n;
}

void BM_LoadCatalog(benchmark::State& state) {
  const auto& dir = snapshot(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(load_catalog(dir));
}

void BM_GorAndClassify(benchmark::State& state) {
  const Catalog c = load_catalog(snapshot(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    auto gor = build_gor(c, "EKKO");
    benchmark::DoNotOptimize(classify_including_masters(c, gor));
  }
}

void BM_Extract(benchmark::State& state) {
  const auto& dir = snapshot(static_cast<std::size_t>(state.range(0)));
  const Catalog c = load_catalog(dir);
  const auto plan = default_plan(c, "EKKO", {}, {}, {"CDHDR", "CDPOS"});
  const auto lookups = load_lookups(dir);
  const auto jobs = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_extraction(c, plan, lookups, {}, jobs));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * total_rows(c)));
}

void BM_SerializeAndFlatten(benchmark::State& state) {
  const auto& dir = snapshot(static_cast<std::size_t>(state.range(0)));
  const Catalog c = load_catalog(dir);
  const auto log = run_extraction(c, default_plan(c, "EKKO"), load_lookups(dir)).log;
  for (auto _ : state) {
    benchmark::DoNotOptimize(serialize_json(log));
    benchmark::DoNotOptimize(flatten(log, "EBELP-EBELP"));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * log.events.size()));
}

}  // namespace

BENCHMARK(BM_LoadCatalog)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GorAndClassify)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Extract)->Args({100, 1})->Args({1000, 1})->Args({1000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SerializeAndFlatten)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
