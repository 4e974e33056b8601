#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "rvsim/isa/csr.hpp"
#include "rvsim/isa/types.hpp"

namespace rvsim {

/// Full architectural state of one hart.
struct ArchState {
  explicit ArchState(const IsaConfig& cfg = {}) : csr(cfg) {}

  uint64_t pc = 0;
  Priv priv = Priv::M;
  CsrFile csr;
  /// LR/SC reservation (physical address), cleared on SC and on trap entry.
  std::optional<uint64_t> reservation;

  uint64_t reg(unsigned r) const { return r == 0 ? 0 : x_[r]; }
  void set_reg(unsigned r, uint64_t v) {
    if (r != 0) x_[r] = v;
  }

  /// Effective privilege for data accesses (mstatus.MPRV applied).
  Priv data_priv() const;
  /// Address translation is active for an access at `p`.
  bool translation_active(Priv p) const { return p != Priv::M && csr.satp_mode() == 8; }

  bool same_architectural_state(const ArchState& o) const;
  /// First differing integer register, or nullopt.
  std::optional<unsigned> first_reg_mismatch(const ArchState& o) const;

 private:
  std::array<uint64_t, 32> x_{};
};

/// Takes a trap: writes the cause/epc/tval of the delegation target, stacks
/// the interrupt enables and privilege, and jumps to the trap vector.
void enter_trap(ArchState& s, const Trap& trap);

/// mret / sret. Returns false when the current privilege (or mstatus.TSR)
/// makes the instruction illegal; the state is untouched in that case.
bool exec_mret(ArchState& s);
bool exec_sret(ArchState& s);

/// Highest-priority interrupt that is pending, enabled and not masked for
/// the current privilege, given the external line levels.
std::optional<Trap> check_pending_interrupt(const ArchState& s, uint8_t lines);

/// Privilege a trap with this cause would be handled in.
Priv trap_target(const ArchState& s, const Trap& trap);

}  // namespace rvsim
