// Serial against OpenMP versions of the verification kernels.

#include <benchmark/benchmark.h>

#include "burkholder/potentials/matrix.hpp"
#include "burkholder/rng.hpp"
#include "burkholder/verify/checks.hpp"
#include "burkholder/verify/paths.hpp"

using namespace burkholder;
using namespace burkholder::verify;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

void BM_EnumeratePaths(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto tree = PredictableTree<double>::generate(n, [&](std::size_t, std::uint64_t) { return rng.normal(); });
  auto step = [&](double s, std::size_t level, std::uint64_t prefix, int sign) { return s + sign * tree.at(level, prefix); };
  auto leaf = [](double s, std::uint64_t) { return s * s; };
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_paths(n, 0.0, step, leaf, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_EnumeratePaths)->ArgsProduct({{12, 16, 20}, {0, 1}});

void BM_Khintchine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_matrix_khintchine(n, 3, 2, 10, 2, false, exec_of(state)));
}
BENCHMARK(BM_Khintchine)->ArgsProduct({{8, 10}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_CheckP3(benchmark::State& state) {
  const MatrixPotential p(MatrixConfig::standard(3, 2, 0.2));
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_p3(p, P3Mode::two_point, trials, 1e-6, 3, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials));
}
BENCHMARK(BM_CheckP3)->ArgsProduct({{1000, 10000}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
