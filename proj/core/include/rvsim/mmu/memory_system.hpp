#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rvsim/isa/csr.hpp"
#include "rvsim/isa/types.hpp"
#include "rvsim/mmu/cache.hpp"
#include "rvsim/mmu/sparse_memory.hpp"
#include "rvsim/mmu/tlb.hpp"

namespace rvsim {

/// Latency model of the memory behind the caches: one port, one request at
/// a time.
struct BackendTiming {
  unsigned first_beat = 20;
  unsigned per_beat = 2;
  unsigned bus_bytes = 8;

  uint64_t line_cycles(unsigned line_bytes) const {
    return first_beat + uint64_t{line_bytes / bus_bytes} * per_beat;
  }
  /// One page-table entry read.
  uint64_t read_cycles() const { return first_beat; }
};

struct MemSysConfig {
  CacheConfig icache{16 * 1024, 4, 64, 1};
  CacheConfig dcache{32 * 1024, 8, 64, 3};
  unsigned itlb_entries = 16;
  unsigned dtlb_entries = 16;
  BackendTiming backend;
  /// Physical ranges that bypass the caches.
  std::vector<SparseMemory::Region> uncached;
};

struct Translation {
  uint64_t paddr = 0;
  uint64_t ready = 0;  // cycle the physical address is available
  bool tlb_miss = false;
  unsigned walk_reads = 0;
  std::optional<Trap> trap;
};

struct CacheTiming {
  uint64_t ready = 0;  // cycle the data (or write acknowledge) is available
  bool hit = false;
  bool uncached = false;
  bool wrote_back = false;
};

enum class FenceKind : uint8_t { Fence, FenceI, SfenceVma };

struct MemSysStats {
  uint64_t itlb_misses = 0;
  uint64_t dtlb_misses = 0;
  uint64_t walks = 0;
  uint64_t walk_cycles = 0;
  uint64_t writebacks = 0;
  uint64_t uncached_accesses = 0;
  uint64_t tlb_flushes = 0;
};

/// Translation, caches and the backend port as one timing model. Data always
/// lives in the SparseMemory; the caches only track tags.
class MemorySystem {
 public:
  MemorySystem(const MemSysConfig& cfg, SparseMemory& mem);

  /// `priv` is the effective privilege of the access (MPRV already applied).
  Translation translate(uint64_t now, uint64_t vaddr, AccessType access, Priv priv,
                        const CsrFile& csr, uint64_t pc);
  CacheTiming ifetch(uint64_t now, uint64_t vaddr, uint64_t paddr);
  CacheTiming data(uint64_t now, uint64_t vaddr, uint64_t paddr, bool write);

  /// Cycles the fence occupies the memory system.
  uint64_t fence_apply(FenceKind kind);

  bool dcache_miss_outstanding(uint64_t now) const { return now < dmiss_.until; }
  bool port_busy(uint64_t now) const { return now < port_free_; }

  CacheModel& icache() { return icache_; }
  CacheModel& dcache() { return dcache_; }
  const CacheModel& icache() const { return icache_; }
  const CacheModel& dcache() const { return dcache_; }
  Tlb& itlb() { return itlb_; }
  Tlb& dtlb() { return dtlb_; }
  SparseMemory& memory() { return mem_; }
  const MemSysConfig& config() const { return cfg_; }
  const MemSysStats& stats() const { return stats_; }

 private:
  bool is_uncached(uint64_t paddr) const;
  struct Miss {
    uint64_t until = 0;
    uint64_t line = 0;
  };
  CacheTiming cache_access(CacheModel& cache, Miss& miss, uint64_t now, uint64_t vaddr,
                           uint64_t paddr, CacheOp op);

  MemSysConfig cfg_;
  SparseMemory& mem_;
  CacheModel icache_;
  CacheModel dcache_;
  Tlb itlb_;
  Tlb dtlb_;
  uint64_t port_free_ = 0;
  Miss imiss_;
  Miss dmiss_;
  MemSysStats stats_;
};

}  // namespace rvsim
