#include <benchmark/benchmark.h>

#include "surfsub/abelian.hpp"
#include "surfsub/classify.hpp"
#include "surfsub/lowindex.hpp"
#include "surfsub/rewrite.hpp"

using namespace surfsub;

static void BM_FreeClassCounts(benchmark::State& state) {
  auto const f     = Presentation::free(2);
  int const  up_to = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(class_counts(f, up_to));
  }
}
BENCHMARK(BM_FreeClassCounts)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

static void BM_OneRelatorClassCounts(benchmark::State& state) {
  auto const p     = parse_presentation("rank=3; relators=bACBaBBABAc");
  int const  up_to = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(class_counts(p, up_to));
  }
}
BENCHMARK(BM_OneRelatorClassCounts)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

static void BM_SubgroupBetti(benchmark::State& state) {
  auto const p      = parse_presentation("rank=3; relators=bACBaBBABAc");
  auto const tables = low_index_subgroups(p, 5);
  for (auto _ : state) {
    std::size_t total = 0;
    for (auto const& t : tables) {
      auto const m = abelianized_relation_matrix(t, p);
      total += betti(invariants(m, m.cols()));
    }
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tables.size()));
}
BENCHMARK(BM_SubgroupBetti);

static void BM_SmithDiagonal(benchmark::State& state) {
  auto const n = static_cast<std::size_t>(state.range(0));
  Rng        rng(1);
  IntMatrix  m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = static_cast<std::int64_t>(rng.below(21)) - 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(smith_diagonal(m));
  }
}
BENCHMARK(BM_SmithDiagonal)->RangeMultiplier(2)->Range(4, 64);

static void BM_ClassifyRandom(benchmark::State& state) {
  Rng rng(7);
  for (auto _ : state) {
    Word w;
    while ((w = random_relator(3, 18, rng)).empty()) {
    }
    benchmark::DoNotOptimize(classify_relator(w, 3, 5));
  }
}
BENCHMARK(BM_ClassifyRandom)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
