#include "rvsim/mmu/memory_system.hpp"

#include <algorithm>

#include "rvsim/mmu/ptw.hpp"

namespace rvsim {

MemorySystem::MemorySystem(const MemSysConfig& cfg, SparseMemory& mem)
    : cfg_(cfg),
      mem_(mem),
      icache_((cfg.icache.validate("icache"), cfg.icache)),
      dcache_((cfg.dcache.validate("dcache"), cfg.dcache)),
      itlb_(cfg.itlb_entries),
      dtlb_(cfg.dtlb_entries) {}

bool MemorySystem::is_uncached(uint64_t paddr) const {
  for (const auto& r : cfg_.uncached) {
    if (paddr >= r.base && paddr - r.base < r.size) return true;
  }
  return false;
}

Translation MemorySystem::translate(uint64_t now, uint64_t vaddr, AccessType access, Priv priv,
                                    const CsrFile& csr, uint64_t pc) {
  Translation t;
  t.ready = now;
  if (priv == Priv::M || csr.satp_mode() != 8) {
    t.paddr = vaddr;
    return t;
  }
  const auto page_fault = [&] { return Trap::exception(page_fault_cause(access), pc, vaddr); };
  if (static_cast<uint64_t>(sign_extend(vaddr, 39)) != vaddr) {
    t.trap = page_fault();
    return t;
  }
  const bool sum = csr.mstatus & mstatus::kSUM;
  const bool mxr = csr.mstatus & mstatus::kMXR;
  Tlb& tlb = access == AccessType::Fetch ? itlb_ : dtlb_;

  auto slot = tlb.lookup(vaddr);
  if (!slot) {
    t.tlb_miss = true;
    (access == AccessType::Fetch ? stats_.itlb_misses : stats_.dtlb_misses)++;
    const WalkResult w = ptw_walk(vaddr, csr.satp_ppn(), mem_, cfg_.backend.read_cycles());
    const uint64_t start = std::max(now, port_free_);
    port_free_ = start + w.cycles;
    t.ready = port_free_;
    t.walk_reads = w.reads;
    ++stats_.walks;
    stats_.walk_cycles += w.cycles;
    if (w.fault == WalkFault::AccessFault) {
      t.trap = Trap::exception(access_fault_cause(access), pc, vaddr);
      return t;
    }
    if (w.fault == WalkFault::PageFault) {
      t.trap = page_fault();
      return t;
    }
    TlbEntry e;
    e.vpn = (vaddr >> 12) & ((uint64_t{1} << 27) - 1);
    e.ppn = pte::ppn(w.pte);
    e.perms = static_cast<uint8_t>(w.pte & 0xff);
    e.level = static_cast<uint8_t>(w.level);
    slot = tlb.fill(e);
  }
  const TlbEntry& e = tlb.entry(*slot);
  if (!leaf_permits(e.perms, access, priv, sum, mxr)) {
    t.trap = page_fault();
    return t;
  }
  t.paddr = e.translate(vaddr);
  return t;
}

CacheTiming MemorySystem::cache_access(CacheModel& cache, Miss& miss, uint64_t now,
                                       uint64_t vaddr, uint64_t paddr, CacheOp op) {
  CacheTiming r;
  const BackendTiming& be = cfg_.backend;
  if (is_uncached(paddr)) {
    r.uncached = true;
    ++stats_.uncached_accesses;
    const uint64_t start = std::max(now, port_free_);
    port_free_ = start + be.first_beat + be.per_beat;
    r.ready = port_free_;
    return r;
  }
  const unsigned lat = cache.config().latency;
  const uint64_t line = paddr / cache.config().line_bytes;
  const CacheResult res = cache.access(vaddr, paddr, op);
  if (res.hit) {
    // Hit-under-miss: hits complete while the single miss is in flight,
    // unless they target the line still being refilled.
    r.hit = true;
    r.ready = now + lat;
    if (line == miss.line && now < miss.until) r.ready = std::max(r.ready, miss.until);
    return r;
  }
  uint64_t cost = be.line_cycles(cache.config().line_bytes);
  if (res.evicted_dirty) {
    r.wrote_back = true;
    ++stats_.writebacks;
    cost += be.line_cycles(cache.config().line_bytes);
  }
  // A second miss waits for the outstanding one.
  const uint64_t start = std::max({now, port_free_, miss.until});
  r.ready = start + lat + cost;
  port_free_ = r.ready;
  miss.until = r.ready;
  miss.line = line;
  return r;
}

CacheTiming MemorySystem::ifetch(uint64_t now, uint64_t vaddr, uint64_t paddr) {
  return cache_access(icache_, imiss_, now, vaddr, paddr, CacheOp::Read);
}

CacheTiming MemorySystem::data(uint64_t now, uint64_t vaddr, uint64_t paddr, bool write) {
  return cache_access(dcache_, dmiss_, now, vaddr, paddr,
                      write ? CacheOp::Write : CacheOp::Read);
}

uint64_t MemorySystem::fence_apply(FenceKind kind) {
  switch (kind) {
    case FenceKind::Fence:
      break;
    case FenceKind::FenceI:
      icache_.invalidate_all();
      break;
    case FenceKind::SfenceVma:
      itlb_.flush();
      dtlb_.flush();
      ++stats_.tlb_flushes;
      break;
  }
  return 1;
}

}  // namespace rvsim
