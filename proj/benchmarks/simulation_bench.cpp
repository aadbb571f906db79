#include <benchmark/benchmark.h>

#include <filesystem>

#include "aiora/simulation.hpp"

using namespace aiora;

namespace {

const ScenarioConfig& scenario(const char* name) {
  static std::map<std::string, ScenarioConfig> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, load_scenario(std::filesystem::path(AIORA_SCENARIO_DIR) / name)).first;
  return it->second;
}

// Cost of one tick of the full pipeline, amortized over a whole run.
void BM_Tick(benchmark::State& state, const char* name) {
  const auto& cfg = scenario(name);
  for (auto _ : state) {
    Simulator sim(cfg);
    sim.setup();
    while (!sim.finished()) sim.step();
    benchmark::DoNotOptimize(sim.trace().size());
  }
  state.SetItemsProcessed(state.iterations() * cfg.horizon);
}
BENCHMARK_CAPTURE(BM_Tick, reference, "reference.json")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Tick, contention, "contention.json")->Unit(benchmark::kMillisecond);

}  // namespace
