#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "nicem/experiments.hpp"

namespace {

// grid12 layout refined by `factor`, case B data, alpha per interface.
struct Fixture {
  nicem::DecomposedMesh mesh;
  std::unique_ptr<nicem::NicemSystem> system;
  nicem::Vector moments;
};

Fixture& fixture(int degree, int factor) {
  static std::map<std::pair<int, int>, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[{degree, factor}];
  if (!slot) {
    slot = std::make_unique<Fixture>();
    nicem::ExperimentConfig cfg;
    cfg.case_name = "B";
    cfg.layout = "grid12";
    cfg.degree = degree;
    slot->mesh = nicem::build_layout(cfg);
    if (factor > 1) slot->mesh = nicem::refine(slot->mesh, factor);
    const auto alpha = nicem::alpha_per_interface(slot->mesh, degree, nicem::AlphaStat::Min);
    slot->system = std::make_unique<nicem::NicemSystem>(slot->mesh, degree, alpha,
                                                        nicem::manufactured_case("B").data());
    slot->moments = slot->system->moments(slot->system->random_state(1));
  }
  return *slot;
}

void BM_SweepSerial(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(f.system->solve_from_moments_serial(f.moments, true));
  st.counters["moments"] = static_cast<double>(f.system->moment_size());
}

void BM_SweepParallel(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  f.system->set_execution(nicem::Execution::Parallel);
  for (auto _ : st) benchmark::DoNotOptimize(f.system->solve_from_moments(f.moments, true));
}

void BM_SolveGmres(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)), 1);
  f.system->set_execution(st.range(1) ? nicem::Execution::Parallel : nicem::Execution::Serial);
  nicem::SolverOptions opts;
  opts.tol = 1e-10;
  for (auto _ : st) benchmark::DoNotOptimize(nicem::run_gmres(*f.system, f.system->zero_state(), opts));
  f.system->set_execution(nicem::Execution::Parallel);
}

}  // namespace

BENCHMARK(BM_SweepSerial)->ArgsProduct({{1, 2, 3}, {1, 2}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->ArgsProduct({{1, 2, 3}, {1, 2}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SolveGmres)->ArgsProduct({{2}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
