#include "rvsim/harness/counters.hpp"

#include <array>

#include "rvsim/backend/core.hpp"

namespace rvsim {

PerfCounters PerfCounters::from_snapshot(const CounterSnapshot& s) {
  PerfCounters c;
  c.cycles = s.cycle;
  c.instret = s.instret;
  c.icache_miss = s.hpm[static_cast<size_t>(HpmEvent::ICacheMiss)];
  c.dcache_miss = s.hpm[static_cast<size_t>(HpmEvent::DCacheMiss)];
  c.itlb_miss = s.hpm[static_cast<size_t>(HpmEvent::ItlbMiss)];
  c.dtlb_miss = s.hpm[static_cast<size_t>(HpmEvent::DtlbMiss)];
  c.loads = s.hpm[static_cast<size_t>(HpmEvent::Load)];
  c.stores = s.hpm[static_cast<size_t>(HpmEvent::Store)];
  c.exceptions = s.hpm[static_cast<size_t>(HpmEvent::Exception)];
  c.branches = s.hpm[static_cast<size_t>(HpmEvent::Branch)];
  c.branch_mispredicts = s.hpm[static_cast<size_t>(HpmEvent::BranchMispredict)];
  c.btb_hits = s.hpm[static_cast<size_t>(HpmEvent::BtbHit)];
  return c;
}

PerfCounters PerfCounters::from_core(const Core& core) {
  PerfCounters c = from_snapshot(core.counters());
  c.ras_hits = core.frontend().stats().ras_hits;
  return c;
}

CounterSnapshot map_counters_to_csrs(const PerfCounters& c) {
  CounterSnapshot s;
  s.cycle = c.cycles;
  s.instret = c.instret;
  s.hpm = {c.icache_miss, c.dcache_miss, c.itlb_miss, c.dtlb_miss, c.loads,
           c.stores,      c.exceptions,  c.branches,  c.branch_mispredicts, c.btb_hits};
  return s;
}

std::string_view hpm_event_name(HpmEvent e) {
  static constexpr std::array<std::string_view, kNumHpmCounters> kNames = {
      "icache_miss", "dcache_miss", "itlb_miss", "dtlb_miss", "loads",
      "stores",      "exceptions",  "branches",  "branch_mispredicts", "btb_hits"};
  return kNames[static_cast<size_t>(e)];
}

}  // namespace rvsim
