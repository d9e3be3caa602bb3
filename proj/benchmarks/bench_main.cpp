#include <random>

#include <benchmark/benchmark.h>

#include "rbk/bergman.hpp"
#include "rbk/envelope.hpp"
#include "rbk/exact/hull.hpp"
#include "rbk/scenario.hpp"
#include "rbk/sections.hpp"

namespace {

rbk::Model model(const char* id) { return rbk::load_shipped(RBK_SCENARIO_DIR, id).model(); }

void BM_Gram(benchmark::State& state) {
  const rbk::Model m = model("diag_bump");
  const int deg = static_cast<int>(state.range(0));
  const auto rmap = rbk::restriction_map(rbk::section_basis(m.polytope(), deg), m.subvariety());
  for (auto _ : state) benchmark::DoNotOptimize(rbk::gram(m, rmap, deg));
}
BENCHMARK(BM_Gram)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_KernelGrid(benchmark::State& state) {
  const rbk::Model m = model(state.range(1) ? "p2_fs" : "p1_bump");
  const int deg = static_cast<int>(state.range(0));
  const auto rmap = rbk::restriction_map(rbk::section_basis(m.polytope(), deg), m.subvariety());
  const auto onb = rbk::orthonormalize(rbk::gram(m, rmap, deg));
  for (auto _ : state) benchmark::DoNotOptimize(rbk::kernel_eval(m, rmap, onb, deg, m.z_grid()));
}
BENCHMARK(BM_KernelGrid)->Args({64, 0})->Args({16, 1})->Unit(benchmark::kMillisecond);

void BM_LowerHull1D(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> z(static_cast<std::size_t>(state.range(0)));
  for (auto& v : z) v = U(rng);
  for (auto _ : state) benchmark::DoNotOptimize(rbk::exact::lower_hull_1d(z));
}
BENCHMARK(BM_LowerHull1D)->Arg(1025)->Arg(1 << 16);

void BM_LowerHull2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1e-3, 1e-3);
  std::vector<double> z;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z.push_back(0.01 * ((i - n / 2) * (i - n / 2) + (j - n / 2) * (j - n / 2)) + U(rng));
  for (auto _ : state) benchmark::DoNotOptimize(rbk::exact::lower_hull_2d(n, z));
}
BENCHMARK(BM_LowerHull2D)->Arg(65)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_AmbientEnvelope(benchmark::State& state) {
  const rbk::Model m = model("diag_bump");
  for (auto _ : state) benchmark::DoNotOptimize(rbk::equilibrium_envelope(m, false));
}
BENCHMARK(BM_AmbientEnvelope)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
