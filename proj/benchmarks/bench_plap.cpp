#include <benchmark/benchmark.h>

#include <memory>

#include "plap/assembly.hpp"
#include "plap/experiments.hpp"
#include "plap/solver.hpp"

using namespace plap;

namespace {

std::shared_ptr<const Space> space_for(int n) {
  return make_space(std::make_shared<const Mesh>(
      build_structured_mesh(case_domain(ExperimentCase::aronsson_singular), n,
                            MeshKind::alternating)));
}

void BM_Jacobian(benchmark::State& state) {
  const auto s = space_for(static_cast<int>(state.range(0)));
  const Assembler a(s);
  const auto u = interpolate(aronsson_data(), s);
  for (auto _ : state) benchmark::DoNotOptimize(a.jacobian(u, 10.0, {1e-8}));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s->mesh().num_cells()));
}
BENCHMARK(BM_Jacobian)->RangeMultiplier(2)->Range(16, 256);

void BM_Residual(benchmark::State& state) {
  const auto s = space_for(static_cast<int>(state.range(0)));
  const Assembler a(s);
  const auto u = interpolate(aronsson_data(), s);
  for (auto _ : state) benchmark::DoNotOptimize(a.residual(u, 10.0, {1e-8}));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s->mesh().num_cells()));
}
BENCHMARK(BM_Residual)->RangeMultiplier(2)->Range(16, 256);

void BM_CgJacobi(benchmark::State& state) {
  const auto s = space_for(static_cast<int>(state.range(0)));
  const Assembler a(s);
  const auto u = interpolate(aronsson_data(), s);
  const SparseMatrix jac = a.jacobian(u, 10.0, {1e-8});
  const std::vector<double> b(jac.size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(cg_solve(jac, b));
}
BENCHMARK(BM_CgJacobi)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const auto s = space_for(static_cast<int>(state.range(0)));
  SolverConfig cfg;
  cfg.p_target = 30.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_plaplace(s, aronsson_data(), cfg));
}
BENCHMARK(BM_Solve)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
