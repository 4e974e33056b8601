#pragma once

#include <cstdint>

#include "rvsim/isa/memory.hpp"

namespace rvsim {

enum class WalkFault : uint8_t { None, PageFault, AccessFault };

struct WalkResult {
  uint64_t pte = 0;
  int level = 0;      // level of the leaf (2 = 1 GiB)
  unsigned reads = 0;  // page-table entries read
  uint64_t cycles = 0;
  WalkFault fault = WalkFault::None;
};

/// SV39 hardware walk from the root table at `root_ppn`. Stops at the first
/// leaf or at an invalid / reserved / misaligned-superpage entry. Permission
/// checks are left to the caller. Each PTE read costs `read_latency`.
WalkResult ptw_walk(uint64_t vaddr, uint64_t root_ppn, const Memory& mem, uint64_t read_latency);

}  // namespace rvsim
