#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace rvsim {

enum class Priv : uint8_t { U = 0, S = 1, M = 3 };

std::string_view priv_name(Priv p);

enum class AccessType : uint8_t { Fetch, Load, Store };

/// Extension switches shared by the decoder, the functional executor and the
/// timing pipeline. RV64I is always present.
struct IsaConfig {
  bool ext_m = true;
  bool ext_a = false;
  bool ext_c = true;
  /// Unlisted CSRs raise illegal-instruction instead of reading as zero.
  bool strict_csr = false;
  /// Honour mcounteren/scounteren for lower-privilege counter reads.
  bool counter_gating = false;
};

namespace cause {
inline constexpr uint64_t kInstrMisaligned = 0;
inline constexpr uint64_t kInstrAccessFault = 1;
inline constexpr uint64_t kIllegalInstr = 2;
inline constexpr uint64_t kBreakpoint = 3;
inline constexpr uint64_t kLoadMisaligned = 4;
inline constexpr uint64_t kLoadAccessFault = 5;
inline constexpr uint64_t kStoreMisaligned = 6;
inline constexpr uint64_t kStoreAccessFault = 7;
inline constexpr uint64_t kEcallU = 8;
inline constexpr uint64_t kEcallS = 9;
inline constexpr uint64_t kEcallM = 11;
inline constexpr uint64_t kInstrPageFault = 12;
inline constexpr uint64_t kLoadPageFault = 13;
inline constexpr uint64_t kStorePageFault = 15;

// Interrupt codes (cause bit 63 set).
inline constexpr uint64_t kSupervisorSoftware = 1;
inline constexpr uint64_t kMachineSoftware = 3;
inline constexpr uint64_t kSupervisorTimer = 5;
inline constexpr uint64_t kMachineTimer = 7;
inline constexpr uint64_t kSupervisorExternal = 9;
inline constexpr uint64_t kMachineExternal = 11;

inline constexpr uint64_t kInterruptBit = uint64_t{1} << 63;
}  // namespace cause

/// A synchronous exception or an interrupt, always attached to exactly one
/// instruction (the faulting one, or the one the interrupt was synchronised to).
struct Trap {
  uint64_t cause = 0;  // includes the interrupt bit
  uint64_t tval = 0;
  uint64_t pc = 0;
  bool is_interrupt = false;

  uint64_t code() const { return cause & ~cause::kInterruptBit; }

  static Trap exception(uint64_t code, uint64_t pc, uint64_t tval = 0) {
    return Trap{code, tval, pc, false};
  }
  static Trap interrupt(uint64_t code, uint64_t pc) {
    return Trap{code | cause::kInterruptBit, 0, pc, true};
  }

  friend bool operator==(const Trap&, const Trap&) = default;
};

uint64_t page_fault_cause(AccessType access);
uint64_t access_fault_cause(AccessType access);
uint64_t misaligned_cause(AccessType access);

inline int64_t sign_extend(uint64_t value, unsigned bits) {
  const unsigned shift = 64 - bits;
  return static_cast<int64_t>(value << shift) >> shift;
}

}  // namespace rvsim
