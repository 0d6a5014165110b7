#include <benchmark/benchmark.h>

#include "bsk/coherence.hpp"
#include "bsk/dictionary.hpp"
#include "bsk/recovery.hpp"

namespace {

struct Instance {
  bsk::BlockDictionary D;
  bsk::BlockVector x;
  bsk::Vector y;
};

Instance make_instance(bsk::Index L, bsk::Index M, bsk::Index d, bsk::Index k) {
  bsk::BlockDictionary D = bsk::random_block_dictionary(L, M, d, 1);
  bsk::BlockVector x = bsk::random_block_sparse_vector(D.shape(), k, 2);
  bsk::Vector y = D.entries() * x.values();
  return {std::move(D), std::move(x), std::move(y)};
}

void BM_Bomp(benchmark::State& state) {
  const Instance in = make_instance(state.range(0), state.range(1), 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(bsk::bomp(in.D, in.y, 3));
}
BENCHMARK(BM_Bomp)->Args({64, 32})->Args({256, 128});

void BM_L21(benchmark::State& state) {
  const Instance in = make_instance(state.range(0), state.range(1), 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(bsk::l21_minimize(in.D, in.y));
}
BENCHMARK(BM_L21)->Args({64, 32})->Args({128, 64});

void BM_BlockCoherence(benchmark::State& state) {
  const bsk::BlockDictionary D = bsk::random_block_dictionary(state.range(0), state.range(1), 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(bsk::block_coherence(D));
}
BENCHMARK(BM_BlockCoherence)->Args({64, 32})->Args({256, 128});

void BM_Oracle(benchmark::State& state) {
  const Instance in = make_instance(64, state.range(0), 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(bsk::oracle_support_search(in.D, in.y, 3));
}
BENCHMARK(BM_Oracle)->Arg(10)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
