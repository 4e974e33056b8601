#include "rvsim/isa/csr.hpp"

namespace rvsim {

namespace {

constexpr uint64_t kMstatusWritable = mstatus::kSIE | mstatus::kMIE | mstatus::kSPIE |
                                      mstatus::kMPIE | mstatus::kSPP | mstatus::kMPP |
                                      mstatus::kMPRV | mstatus::kSUM | mstatus::kMXR |
                                      mstatus::kTVM | mstatus::kTW | mstatus::kTSR;
constexpr uint64_t kSstatusReadable = mstatus::kSIE | mstatus::kSPIE | mstatus::kSPP |
                                      mstatus::kSUM | mstatus::kMXR | mstatus::kUXL;
constexpr uint64_t kSstatusWritable =
    mstatus::kSIE | mstatus::kSPIE | mstatus::kSPP | mstatus::kSUM | mstatus::kMXR;

constexpr uint64_t kMedelegWritable = 0x3ff | (1u << 12) | (1u << 13) | (1u << 15);
constexpr uint64_t kSupervisorIrqs = (1u << 1) | (1u << 5) | (1u << 9);
constexpr uint64_t kMieWritable = 0xaaa;
constexpr uint64_t kMipWritable = kSupervisorIrqs;

constexpr uint64_t legalize_tvec(uint64_t value) {
  uint64_t mode = value & 3;
  if (mode > 1) mode = 0;
  return (value & ~uint64_t{3}) | mode;
}

bool in_range(uint16_t addr, uint16_t base, unsigned count) {
  return addr >= base && addr < base + count;
}

}  // namespace

CsrFile::CsrFile(const IsaConfig& c) : cfg(c) {
  misa = (uint64_t{2} << 62) | (1u << 8) | (1u << 18) | (1u << 20);
  if (cfg.ext_m) misa |= 1u << 12;
  if (cfg.ext_a) misa |= 1u << 0;
  if (cfg.ext_c) misa |= 1u << 2;
}

uint64_t CsrFile::mip() const {
  uint64_t v = mip_sw & kMipWritable;
  if (irq_lines & irq::kMachineExternal) v |= 1u << cause::kMachineExternal;
  if (irq_lines & irq::kSupervisorExternal) v |= 1u << cause::kSupervisorExternal;
  if (irq_lines & irq::kMachineTimer) v |= 1u << cause::kMachineTimer;
  if (irq_lines & irq::kMachineSoftware) v |= 1u << cause::kMachineSoftware;
  return v;
}

bool CsrFile::is_implemented(uint16_t addr) const {
  switch (addr) {
    case csr::kSstatus: case csr::kSie: case csr::kStvec: case csr::kScounteren:
    case csr::kSscratch: case csr::kSepc: case csr::kScause: case csr::kStval: case csr::kSip:
    case csr::kSatp:
    case csr::kMstatus: case csr::kMisa: case csr::kMedeleg: case csr::kMideleg: case csr::kMie:
    case csr::kMtvec: case csr::kMcounteren: case csr::kMscratch: case csr::kMepc:
    case csr::kMcause: case csr::kMtval: case csr::kMip:
    case csr::kMcycle: case csr::kMinstret: case csr::kCycle: case csr::kInstret:
    case csr::kMvendorid: case csr::kMarchid: case csr::kMimpid: case csr::kMhartid:
      return true;
    default:
      return in_range(addr, csr::kMhpmcounter3, kNumHpmCounters) ||
             in_range(addr, csr::kHpmcounter3, kNumHpmCounters) ||
             in_range(addr, csr::kMhpmevent3, kNumHpmCounters);
  }
}

bool CsrFile::counter_visible(uint16_t addr, Priv priv) const {
  if (!cfg.counter_gating || priv == Priv::M) return true;
  const unsigned idx = addr - csr::kCycle;
  if (!((mcounteren >> idx) & 1)) return false;
  if (priv == Priv::U && !((scounteren >> idx) & 1)) return false;
  return true;
}

std::optional<uint64_t> CsrFile::read_counter(uint16_t addr) const {
  if (addr == csr::kMcycle || addr == csr::kCycle) return counters.cycle + offsets.cycle;
  if (addr == csr::kMinstret || addr == csr::kInstret) return counters.instret + offsets.instret;
  for (uint16_t base : {csr::kMhpmcounter3, csr::kHpmcounter3}) {
    if (in_range(addr, base, kNumHpmCounters)) {
      const unsigned i = addr - base;
      return counters.hpm[i] + offsets.hpm[i];
    }
  }
  return std::nullopt;
}

void CsrFile::write_counter(uint16_t addr, uint64_t value) {
  if (addr == csr::kMcycle) {
    offsets.cycle = value - counters.cycle;
  } else if (addr == csr::kMinstret) {
    offsets.instret = value - counters.instret;
  } else if (in_range(addr, csr::kMhpmcounter3, kNumHpmCounters)) {
    const unsigned i = addr - csr::kMhpmcounter3;
    offsets.hpm[i] = value - counters.hpm[i];
  }
}

std::optional<uint64_t> CsrFile::read(uint16_t addr, Priv priv) const {
  const auto required = static_cast<unsigned>((addr >> 8) & 3);
  if (static_cast<unsigned>(priv) < required) return std::nullopt;
  if (!is_implemented(addr)) {
    if (cfg.strict_csr) return std::nullopt;
    return 0;
  }
  if (addr == csr::kSatp && priv == Priv::S && (mstatus & mstatus::kTVM)) return std::nullopt;
  if (in_range(addr, csr::kCycle, 32) && !counter_visible(addr, priv)) return std::nullopt;

  switch (addr) {
    case csr::kSstatus: return mstatus & kSstatusReadable;
    case csr::kSie: return mie & mideleg;
    case csr::kStvec: return stvec;
    case csr::kScounteren: return scounteren;
    case csr::kSscratch: return sscratch;
    case csr::kSepc: return sepc;
    case csr::kScause: return scause;
    case csr::kStval: return stval;
    case csr::kSip: return mip() & mideleg;
    case csr::kSatp: return satp;
    case csr::kMstatus: return mstatus;
    case csr::kMisa: return misa;
    case csr::kMedeleg: return medeleg;
    case csr::kMideleg: return mideleg;
    case csr::kMie: return mie;
    case csr::kMtvec: return mtvec;
    case csr::kMcounteren: return mcounteren;
    case csr::kMscratch: return mscratch;
    case csr::kMepc: return mepc;
    case csr::kMcause: return mcause;
    case csr::kMtval: return mtval;
    case csr::kMip: return mip();
    case csr::kMvendorid:
    case csr::kMarchid:
    case csr::kMimpid:
    case csr::kMhartid:
      return 0;
    default:
      break;
  }
  if (in_range(addr, csr::kMhpmevent3, kNumHpmCounters)) {
    return static_cast<uint64_t>(addr - csr::kMhpmevent3 + 1);
  }
  return read_counter(addr);
}

bool CsrFile::write(uint16_t addr, uint64_t value, Priv priv) {
  const auto required = static_cast<unsigned>((addr >> 8) & 3);
  if (static_cast<unsigned>(priv) < required) return false;
  if (((addr >> 10) & 3) == 3) return false;  // read-only space
  if (!is_implemented(addr)) return !cfg.strict_csr;
  if (addr == csr::kSatp && priv == Priv::S && (mstatus & mstatus::kTVM)) return false;

  switch (addr) {
    case csr::kSstatus:
      mstatus = (mstatus & ~kSstatusWritable) | (value & kSstatusWritable);
      return true;
    case csr::kSie:
      mie = (mie & ~mideleg) | (value & mideleg & kMieWritable);
      return true;
    case csr::kStvec: stvec = legalize_tvec(value); return true;
    case csr::kScounteren: scounteren = value & 0xffffffffu; return true;
    case csr::kSscratch: sscratch = value; return true;
    case csr::kSepc: sepc = value & ~uint64_t{1}; return true;
    case csr::kScause: scause = value; return true;
    case csr::kStval: stval = value; return true;
    case csr::kSip: {
      const uint64_t mask = mideleg & (1u << cause::kSupervisorSoftware);
      mip_sw = (mip_sw & ~mask) | (value & mask);
      return true;
    }
    case csr::kSatp: {
      const uint64_t mode = value >> 60;
      if (mode != 0 && mode != 8) return true;  // WARL: reserved modes drop the write
      satp = value & ~(uint64_t{0xffff} << 44);  // ASIDs are not implemented
      return true;
    }
    case csr::kMstatus: {
      uint64_t next = (mstatus & ~kMstatusWritable) | (value & kMstatusWritable);
      if (((next & mstatus::kMPP) >> mstatus::kMPPShift) == 2) {
        next = (next & ~mstatus::kMPP) | (mstatus & mstatus::kMPP);
      }
      mstatus = next;
      return true;
    }
    case csr::kMisa: return true;
    case csr::kMedeleg: medeleg = value & kMedelegWritable; return true;
    case csr::kMideleg: mideleg = value & kSupervisorIrqs; return true;
    case csr::kMie: mie = value & kMieWritable; return true;
    case csr::kMtvec: mtvec = legalize_tvec(value); return true;
    case csr::kMcounteren: mcounteren = value & 0xffffffffu; return true;
    case csr::kMscratch: mscratch = value; return true;
    case csr::kMepc: mepc = value & ~uint64_t{1}; return true;
    case csr::kMcause: mcause = value; return true;
    case csr::kMtval: mtval = value; return true;
    case csr::kMip: mip_sw = (mip_sw & ~kMipWritable) | (value & kMipWritable); return true;
    default:
      break;
  }
  if (in_range(addr, csr::kMhpmevent3, kNumHpmCounters)) return true;  // fixed mapping
  write_counter(addr, value);
  return true;
}

bool CsrFile::same_architectural_state(const CsrFile& o) const {
  return mstatus == o.mstatus && medeleg == o.medeleg && mideleg == o.mideleg && mie == o.mie &&
         mip() == o.mip() && mtvec == o.mtvec && mcounteren == o.mcounteren &&
         mscratch == o.mscratch && mepc == o.mepc && mcause == o.mcause && mtval == o.mtval &&
         stvec == o.stvec && scounteren == o.scounteren && sscratch == o.sscratch &&
         sepc == o.sepc && scause == o.scause && stval == o.stval && satp == o.satp &&
         offsets == o.offsets;
}

}  // namespace rvsim
