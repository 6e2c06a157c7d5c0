#include <benchmark/benchmark.h>

#include <random>

#include "tilt/ainf.hpp"
#include "tilt/derived.hpp"
#include "tilt/pipeline.hpp"
#include "tilt/rickard.hpp"

using namespace tilt;

namespace {

AlgebraPtr path_an(int n, const std::vector<Relation>& rel = {}) {
  Quiver q{n, {}};
  for (int i = 0; i + 1 < n; ++i) q.arrows.push_back({i, i + 1, "a" + std::to_string(i + 1)});
  return algebra_from_quiver(q, rel, Field::rational());
}

std::vector<Complex> simples(const AlgebraPtr& a) {
  std::vector<Complex> xs;
  for (int v = 0; v < a->vertices(); ++v) xs.push_back(Complex::stalk(make_summand(a, SummandKind::S, v), 0));
  return xs;
}

void BM_Rank(benchmark::State& state) {
  std::mt19937 rng(1);
  auto n = static_cast<std::size_t>(state.range(0));
  Mat m(Field::prime(101), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.set(i, j, Scalar(static_cast<long>(rng() % 101)));
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(BM_Rank)->Arg(16)->Arg(32)->Arg(64);

void BM_ProjectiveResolution(benchmark::State& state) {
  auto a = path_an(static_cast<int>(state.range(0)));
  auto xs = simples(a);
  for (auto _ : state)
    for (const auto& x : xs) benchmark::DoNotOptimize(projective_resolution(x, 8));
}
BENCHMARK(BM_ProjectiveResolution)->Arg(2)->Arg(4)->Arg(6);

void BM_DerivedHom(benchmark::State& state) {
  auto a = path_an(4, {{{Scalar(1), {"a1", "a2", "a3"}}}});
  auto xs = simples(a);
  for (auto _ : state) benchmark::DoNotOptimize(derived_hom(xs[0], xs[3], 8));
}
BENCHMARK(BM_DerivedHom);

void BM_Rickard(benchmark::State& state) {
  auto a = path_an(static_cast<int>(state.range(0)));
  auto xs = simples(a);
  for (auto _ : state) benchmark::DoNotOptimize(rickard_construct(xs, {3, 8, 0}));
}
BENCHMARK(BM_Rickard)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CheckTilting(benchmark::State& state) {
  auto a = path_an(4);
  auto r = rickard_construct(simples(a), {3, 8, 0});
  for (auto _ : state) benchmark::DoNotOptimize(check_tilting(r));
}
BENCHMARK(BM_CheckTilting)->Unit(benchmark::kMillisecond);

void BM_MinimalModel(benchmark::State& state) {
  auto a = path_an(4, {{{Scalar(1), {"a1", "a2", "a3"}}}});
  auto xs = simples(a);
  for (auto _ : state) benchmark::DoNotOptimize(collection_ainf(xs, static_cast<int>(state.range(0)), 8));
}
BENCHMARK(BM_MinimalModel)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DualBar(benchmark::State& state) {
  auto a = path_an(3);
  auto xs = simples(a);
  int w = static_cast<int>(state.range(0));
  auto x = collection_ainf(xs, 4, 8);
  auto cap = tensor_cap_for(x, w).value_or(4);
  x = collection_ainf(xs, 4, 8, cap);
  for (auto _ : state) benchmark::DoNotOptimize(dual_bar_dg(x, w, cap));
}
BENCHMARK(BM_DualBar)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_PipelineCorpusJob(benchmark::State& state) {
  JobSpec job = load_job(std::filesystem::path(TILT_CORPUS_DIR) / "a4_abc_simples.job.json");
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(job));
}
BENCHMARK(BM_PipelineCorpusJob)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
