#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "rvsim/isa/csr.hpp"

namespace rvsim {

class Core;

struct PerfCounters {
  uint64_t cycles = 0;
  uint64_t instret = 0;
  uint64_t icache_miss = 0;
  uint64_t dcache_miss = 0;
  uint64_t itlb_miss = 0;
  uint64_t dtlb_miss = 0;
  uint64_t loads = 0;
  uint64_t stores = 0;
  uint64_t exceptions = 0;  // exceptions and interrupts
  uint64_t branches = 0;
  uint64_t branch_mispredicts = 0;
  uint64_t btb_hits = 0;
  uint64_t ras_hits = 0;

  static PerfCounters from_core(const Core& core);
  /// Inverse of map_counters_to_csrs (ras_hits has no CSR).
  static PerfCounters from_snapshot(const CounterSnapshot& s);

  double ipc() const { return cycles ? static_cast<double>(instret) / cycles : 0.0; }
  double mispredict_rate() const {
    return branches ? static_cast<double>(branch_mispredicts) / branches : 0.0;
  }
};

/// mcycle, minstret and mhpmcounter3..12 in HpmEvent order.
CounterSnapshot map_counters_to_csrs(const PerfCounters& c);

std::string_view hpm_event_name(HpmEvent e);

}  // namespace rvsim
