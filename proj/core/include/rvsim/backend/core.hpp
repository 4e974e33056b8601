#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>

#include "rvsim/backend/units.hpp"
#include "rvsim/frontend/frontend.hpp"
#include "rvsim/isa/arch_state.hpp"
#include "rvsim/isa/execute.hpp"
#include "rvsim/mmu/memory_system.hpp"

namespace rvsim {

struct BackendConfig {
  unsigned rob_entries = 8;
  unsigned store_buffer_depth = 8;
  unsigned issue_queue_depth = 2;
  bool dual_retire = true;
  unsigned alu_latency = 1;
  unsigned mul_latency = 2;
  /// Cycles a WFI waits at commit for an interrupt before retiring anyway.
  unsigned wfi_budget = 256;

  void validate() const;
};

struct CoreConfig {
  IsaConfig isa;
  MemSysConfig mem;
  FrontendConfig frontend;
  BackendConfig backend;
};

enum class RetireKind : uint8_t { Retired, Exception, Interrupt };

/// What commit did with one instruction. Exceptions and interrupts are
/// reported at the instruction they are attached to; that instruction does
/// not retire.
struct RetireRecord {
  RetireKind kind = RetireKind::Retired;
  uint64_t cycle = 0;
  uint64_t rob_id = 0;
  uint64_t pc = 0;
  uint64_t pc_paddr = 0;
  DecodedInst inst;
  Priv priv = Priv::M;  // privilege the instruction executed in
  std::optional<RegWrite> reg_write;
  std::optional<MemAccess> load;
  std::optional<MemAccess> store;
  std::optional<Trap> trap;
  /// Counter values visible to a CSR read by this instruction.
  CounterSnapshot counters;
  bool vm_active = false;  // data translation active for this instruction
  bool mispredicted = false;
};

struct CoreStats {
  uint64_t retired = 0;
  uint64_t dual_retire_cycles = 0;
  uint64_t exceptions = 0;
  uint64_t interrupts = 0;
  uint64_t loads = 0;
  uint64_t stores = 0;
  uint64_t branches = 0;
  uint64_t mispredicts = 0;
  uint64_t flushes = 0;
  uint64_t max_rob_occupancy = 0;
  uint64_t max_retire_per_cycle = 0;
  uint64_t stall_operands = 0;
  uint64_t stall_rob_full = 0;
  uint64_t stall_rename = 0;
  uint64_t stall_fu_busy = 0;
  uint64_t stall_sb_conflict = 0;
  uint64_t stall_serialize = 0;
  uint64_t sb_dropped = 0;
  uint64_t sb_drained = 0;
  uint64_t wfi_cycles = 0;
  /// Resolve-to-first-correct-path-issue distance of mispredicts.
  uint64_t penalty_samples = 0;
  uint64_t penalty_min = 0;
  uint64_t penalty_max = 0;
  uint64_t penalty_total = 0;
};

/// The timing pipeline: frontend, issue, functional units, scoreboard,
/// store buffer and commit around one architectural state.
class Core {
 public:
  Core(const CoreConfig& cfg, SparseMemory& mem);

  void reset(uint64_t pc);
  /// Advances one clock cycle.
  void tick();

  void set_irq_lines(uint8_t lines) { lines_ = lines; }
  uint8_t irq_lines() const { return lines_; }
  void set_retire_hook(std::function<void(const RetireRecord&)> hook) { hook_ = std::move(hook); }

  uint64_t cycle() const { return cycle_; }
  CounterSnapshot counters() const;
  ArchState& arch() { return arch_; }
  const ArchState& arch() const { return arch_; }
  MemorySystem& mem() { return memsys_; }
  const MemorySystem& mem() const { return memsys_; }
  Frontend& frontend() { return frontend_; }
  const Frontend& frontend() const { return frontend_; }
  const StoreBuffer& store_buffer() const { return sb_; }
  const CoreStats& stats() const { return stats_; }
  const CoreConfig& config() const { return cfg_; }
  size_t rob_occupancy() const { return rob_.size(); }
  /// No instruction in flight past the frontend.
  bool quiescent() const { return rob_.empty() && iq_.empty() && sb_.empty(); }
  /// Writes committed store-buffer entries straight to memory (no timing)
  /// and discards speculative ones; used when a run ends.
  void drain_stores_now();

 private:
  enum class State : uint8_t { Issued, Done };

  struct RobEntry {
    uint64_t id = 0;
    FetchEntry f;
    State state = State::Issued;
    uint64_t done_at = 0;
    bool writes_rd = false;
    uint8_t rd_ext = 0;
    uint64_t result = 0;
    std::optional<Trap> trap;
    bool commit_exec = false;  // CSR/system/fence work done at commit
    bool taken = false;
    uint64_t next_pc = 0;
    bool mispredicted = false;
    bool is_div = false;
    std::optional<MemAccess> load;
    std::optional<MemAccess> store;
    bool in_store_buffer = false;
    std::optional<uint64_t> set_reservation;
    bool clear_reservation = false;
    bool vm_active = false;
    Priv priv = Priv::M;
  };

  struct IqEntry {
    FetchEntry f;
    uint64_t ready = 0;
  };

  void commit();
  void execute();
  void issue();
  void drain_store_buffer();
  void decode();

  bool commit_one(RobEntry& e, bool first);
  void take_trap(const RobEntry& e, const Trap& trap, RetireKind kind);
  void flush_all(uint64_t target, RedirectReason reason, const Ras* ras);
  void flush_younger(uint64_t id);
  void emit(RetireKind kind, const RobEntry& e, const std::optional<Trap>& trap, Priv priv,
            const CounterSnapshot& counters);

  // Issue helpers; false means stall.
  bool read_operand(unsigned reg, uint64_t& value) const;
  bool issue_memory(RobEntry& e, uint64_t a, uint64_t b);
  bool issue_amo(RobEntry& e, uint64_t a, uint64_t b);

  CoreConfig cfg_;
  MemorySystem memsys_;
  Frontend frontend_;
  ArchState arch_;
  StoreBuffer sb_;
  std::deque<RobEntry> rob_;
  std::deque<IqEntry> iq_;
  std::array<uint8_t, 32> rename_bit_{};
  uint64_t next_id_ = 0;
  uint64_t cycle_ = 0;
  uint8_t lines_ = 0;

  uint64_t div_busy_until_ = 0;
  uint64_t lsu_busy_until_ = 0;
  uint64_t sb_busy_until_ = 0;
  bool load_issued_ = false;
  uint64_t wfi_since_ = 0;
  bool wfi_waiting_ = false;
  std::optional<uint64_t> last_mispredict_;

  std::function<void(const RetireRecord&)> hook_;
  CoreStats stats_;
};

}  // namespace rvsim
