#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rvsim/mmu/cache.hpp"
#include "rvsim/mmu/tlb.hpp"

namespace {

std::vector<uint64_t> addresses(uint64_t span) {
  std::mt19937_64 rng(7);
  std::vector<uint64_t> out(1 << 14);
  for (auto& a : out) a = 0x80000000 + rng() % span;
  return out;
}

void BM_DataCacheAccess(benchmark::State& state) {
  rvsim::CacheModel cache(rvsim::CacheConfig{32 * 1024, 8, 64, 3});
  const auto addrs = addresses(static_cast<uint64_t>(state.range(0)));
  size_t i = 0;
  for (auto _ : state) {
    const uint64_t a = addrs[i++ & (addrs.size() - 1)];
    benchmark::DoNotOptimize(cache.access(a, a, (i & 3) ? rvsim::CacheOp::Read : rvsim::CacheOp::Write));
  }
  state.SetItemsProcessed(state.iterations());
  state.counters["miss_rate"] = static_cast<double>(cache.misses()) / static_cast<double>(state.iterations());
}
BENCHMARK(BM_DataCacheAccess)->Arg(16 * 1024)->Arg(256 * 1024);

void BM_TlbLookup(benchmark::State& state) {
  rvsim::Tlb tlb;
  for (uint64_t p = 0; p < 16; ++p) {
    rvsim::TlbEntry e;
    e.vpn = p;
    e.ppn = 0x80000 + p;
    e.perms = rvsim::pte::kV | rvsim::pte::kR | rvsim::pte::kA;
    tlb.fill(e);
  }
  uint64_t v = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tlb.lookup((v++ & 15) << 12));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TlbLookup);

}  // namespace
