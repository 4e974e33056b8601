#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "rvsim/isa/types.hpp"

namespace rvsim {

namespace csr {
inline constexpr uint16_t kSstatus = 0x100;
inline constexpr uint16_t kSie = 0x104;
inline constexpr uint16_t kStvec = 0x105;
inline constexpr uint16_t kScounteren = 0x106;
inline constexpr uint16_t kSscratch = 0x140;
inline constexpr uint16_t kSepc = 0x141;
inline constexpr uint16_t kScause = 0x142;
inline constexpr uint16_t kStval = 0x143;
inline constexpr uint16_t kSip = 0x144;
inline constexpr uint16_t kSatp = 0x180;

inline constexpr uint16_t kMstatus = 0x300;
inline constexpr uint16_t kMisa = 0x301;
inline constexpr uint16_t kMedeleg = 0x302;
inline constexpr uint16_t kMideleg = 0x303;
inline constexpr uint16_t kMie = 0x304;
inline constexpr uint16_t kMtvec = 0x305;
inline constexpr uint16_t kMcounteren = 0x306;
inline constexpr uint16_t kMhpmevent3 = 0x323;
inline constexpr uint16_t kMscratch = 0x340;
inline constexpr uint16_t kMepc = 0x341;
inline constexpr uint16_t kMcause = 0x342;
inline constexpr uint16_t kMtval = 0x343;
inline constexpr uint16_t kMip = 0x344;

inline constexpr uint16_t kMcycle = 0xb00;
inline constexpr uint16_t kMinstret = 0xb02;
inline constexpr uint16_t kMhpmcounter3 = 0xb03;
inline constexpr uint16_t kCycle = 0xc00;
inline constexpr uint16_t kInstret = 0xc02;
inline constexpr uint16_t kHpmcounter3 = 0xc03;

inline constexpr uint16_t kMvendorid = 0xf11;
inline constexpr uint16_t kMarchid = 0xf12;
inline constexpr uint16_t kMimpid = 0xf13;
inline constexpr uint16_t kMhartid = 0xf14;
}  // namespace csr

namespace mstatus {
inline constexpr uint64_t kSIE = 1ull << 1;
inline constexpr uint64_t kMIE = 1ull << 3;
inline constexpr uint64_t kSPIE = 1ull << 5;
inline constexpr uint64_t kMPIE = 1ull << 7;
inline constexpr uint64_t kSPP = 1ull << 8;
inline constexpr unsigned kMPPShift = 11;
inline constexpr uint64_t kMPP = 3ull << kMPPShift;
inline constexpr uint64_t kMPRV = 1ull << 17;
inline constexpr uint64_t kSUM = 1ull << 18;
inline constexpr uint64_t kMXR = 1ull << 19;
inline constexpr uint64_t kTVM = 1ull << 20;
inline constexpr uint64_t kTW = 1ull << 21;
inline constexpr uint64_t kTSR = 1ull << 22;
inline constexpr uint64_t kUXL = 2ull << 32;
inline constexpr uint64_t kSXL = 2ull << 34;
}  // namespace mstatus

/// Interrupt line order on the core boundary.
namespace irq {
inline constexpr uint8_t kMachineExternal = 1 << 0;
inline constexpr uint8_t kSupervisorExternal = 1 << 1;
inline constexpr uint8_t kMachineTimer = 1 << 2;
inline constexpr uint8_t kMachineSoftware = 1 << 3;
}  // namespace irq

/// Hardware performance-monitor events, in mhpmcounter3.. order.
enum class HpmEvent : uint8_t {
  ICacheMiss,
  DCacheMiss,
  ItlbMiss,
  DtlbMiss,
  Load,
  Store,
  Exception,
  Branch,
  BranchMispredict,
  BtbHit,
};
inline constexpr unsigned kNumHpmCounters = 10;

struct CounterSnapshot {
  uint64_t cycle = 0;
  uint64_t instret = 0;
  std::array<uint64_t, kNumHpmCounters> hpm{};

  friend bool operator==(const CounterSnapshot&, const CounterSnapshot&) = default;
};

/// Control and status registers of one hart. Counter CSRs are views over a
/// snapshot owned by whoever drives the hart (the timing pipeline, or the
/// functional model when it runs alone); guest writes are kept as offsets so
/// the underlying event counts stay intact.
class CsrFile {
 public:
  explicit CsrFile(const IsaConfig& cfg = {});

  /// nullopt: the access raises illegal-instruction.
  std::optional<uint64_t> read(uint16_t addr, Priv priv) const;
  /// false: the access raises illegal-instruction; the file is unchanged.
  bool write(uint16_t addr, uint64_t value, Priv priv);

  bool is_implemented(uint16_t addr) const;

  uint64_t mip() const;
  uint64_t satp_mode() const { return satp >> 60; }
  uint64_t satp_ppn() const { return satp & ((uint64_t{1} << 44) - 1); }
  Priv mpp() const { return static_cast<Priv>((mstatus & mstatus::kMPP) >> mstatus::kMPPShift); }

  /// Compares architectural contents, ignoring the raw event snapshot.
  bool same_architectural_state(const CsrFile& other) const;

  IsaConfig cfg;
  uint64_t misa = 0;
  uint64_t mstatus = mstatus::kUXL | mstatus::kSXL;
  uint64_t medeleg = 0;
  uint64_t mideleg = 0;
  uint64_t mie = 0;
  uint64_t mip_sw = 0;  // SSIP/STIP/SEIP written by software
  uint8_t irq_lines = 0;
  uint64_t mtvec = 0;
  uint64_t mcounteren = 0;
  uint64_t mscratch = 0;
  uint64_t mepc = 0;
  uint64_t mcause = 0;
  uint64_t mtval = 0;
  uint64_t stvec = 0;
  uint64_t scounteren = 0;
  uint64_t sscratch = 0;
  uint64_t sepc = 0;
  uint64_t scause = 0;
  uint64_t stval = 0;
  uint64_t satp = 0;

  CounterSnapshot counters;
  CounterSnapshot offsets;

 private:
  bool counter_visible(uint16_t addr, Priv priv) const;
  std::optional<uint64_t> read_counter(uint16_t addr) const;
  void write_counter(uint16_t addr, uint64_t value);
};

}  // namespace rvsim
