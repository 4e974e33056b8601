#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "rvsim/isa/arch_state.hpp"
#include "rvsim/isa/decode.hpp"
#include "rvsim/isa/memory.hpp"

namespace rvsim {

// Pure datapath kernels. Both the functional model and the timing
// pipeline's functional units evaluate results through these.

/// ALU result for register-register or register-immediate forms; for the
/// immediate forms pass the immediate as `b`. LUI/AUIPC use `pc` and imm.
uint64_t alu_compute(Op op, uint64_t a, uint64_t b, uint64_t pc);
bool branch_taken(Op op, uint64_t a, uint64_t b);
uint64_t muldiv_compute(Op op, uint64_t a, uint64_t b);
unsigned mem_width(Op op);
uint64_t load_extend(Op op, uint64_t raw);
/// New memory value for an AMO read-modify-write (not LR/SC).
uint64_t amo_compute(Op op, uint64_t mem_value, uint64_t src);
bool is_load_reserved(Op op);
bool is_store_conditional(Op op);

/// Reference SV39 translation used by the functional model. Walks the page
/// table directly (no TLB), enforcing permissions and the A/D policy
/// (A=0, or D=0 on a store, faults). Returns the physical address or the
/// page-fault / access-fault trap.
std::variant<uint64_t, Trap> reference_translate(const ArchState& s, uint64_t vaddr,
                                                 AccessType access, Priv priv,
                                                 const Memory& mem, uint64_t pc);

struct MemAccess {
  uint64_t vaddr = 0;
  uint64_t paddr = 0;
  uint64_t data = 0;  // loaded value (raw) or stored value
  uint8_t width = 0;
  bool is_store = false;

  friend bool operator==(const MemAccess&, const MemAccess&) = default;
};

struct RegWrite {
  uint8_t rd = 0;
  uint64_t value = 0;
  friend bool operator==(const RegWrite&, const RegWrite&) = default;
};

struct ExecOutcome {
  std::optional<Trap> trap;
  std::optional<RegWrite> reg_write;
  std::optional<MemAccess> load;
  std::optional<MemAccess> store;
};

/// Architectural effect of exactly one instruction on `s`. When a trap is
/// returned, `s` already reflects trap entry.
ExecOutcome exec_functional(ArchState& s, const DecodedInst& inst, Memory& mem,
                            const IsaConfig& cfg);

struct FetchOutcome {
  std::optional<DecodedInst> inst;
  std::optional<Trap> trap;
  uint64_t paddr = 0;
};

/// Fetches and decodes the instruction at s.pc (translation applied).
FetchOutcome fetch_functional(const ArchState& s, const Memory& mem, const IsaConfig& cfg);

/// Instruction-accurate hart: the reference model the timing pipeline is
/// checked against.
class FunctionalHart {
 public:
  FunctionalHart(Memory& mem, const IsaConfig& cfg);

  struct Step {
    uint64_t pc = 0;
    std::optional<DecodedInst> inst;
    ExecOutcome outcome;
  };

  /// Executes one instruction at the current pc.
  Step step();
  /// Takes an interrupt before the next instruction.
  void take_trap(const Trap& trap);

  /// Counter snapshot visible to the next instruction; when `auto_counters`
  /// is on the hart counts its own retirements instead.
  void set_counters(const CounterSnapshot& c) { state_.csr.counters = c; }
  void set_auto_counters(bool on) { auto_counters_ = on; }

  ArchState& state() { return state_; }
  const ArchState& state() const { return state_; }
  Memory& memory() { return mem_; }
  uint64_t retired() const { return retired_; }

 private:
  Memory& mem_;
  IsaConfig cfg_;
  ArchState state_;
  uint64_t retired_ = 0;
  bool auto_counters_ = true;
};

}  // namespace rvsim
