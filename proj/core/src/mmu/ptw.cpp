#include "rvsim/mmu/ptw.hpp"

#include "rvsim/mmu/tlb.hpp"

namespace rvsim {

WalkResult ptw_walk(uint64_t vaddr, uint64_t root_ppn, const Memory& mem, uint64_t read_latency) {
  WalkResult r;
  uint64_t table = root_ppn << 12;
  for (int level = 2; level >= 0; --level) {
    const uint64_t vpn = (vaddr >> (12 + 9 * level)) & 0x1ff;
    const uint64_t addr = table + vpn * 8;
    ++r.reads;
    r.cycles += read_latency;
    r.level = level;
    if (!mem.accessible(addr, 8)) {
      r.fault = WalkFault::AccessFault;
      return r;
    }
    const uint64_t e = mem.read(addr, 8);
    r.pte = e;
    const bool v = e & pte::kV, rd = e & pte::kR, wr = e & pte::kW, x = e & pte::kX;
    if (!v || (!rd && wr) || (e >> 54) != 0) {
      r.fault = WalkFault::PageFault;
      return r;
    }
    if (rd || x) {
      if (level > 0 && (pte::ppn(e) & ((uint64_t{1} << (9 * level)) - 1)) != 0) {
        r.fault = WalkFault::PageFault;
      }
      return r;
    }
    table = pte::ppn(e) << 12;
  }
  // Pointer at level 0.
  r.fault = WalkFault::PageFault;
  return r;
}

}  // namespace rvsim
