#include "rvsim/isa/arch_state.hpp"

namespace rvsim {

Priv ArchState::data_priv() const {
  if (priv == Priv::M && (csr.mstatus & mstatus::kMPRV)) return csr.mpp();
  return priv;
}

bool ArchState::same_architectural_state(const ArchState& o) const {
  return pc == o.pc && priv == o.priv && x_ == o.x_ && reservation == o.reservation &&
         csr.same_architectural_state(o.csr);
}

std::optional<unsigned> ArchState::first_reg_mismatch(const ArchState& o) const {
  for (unsigned r = 1; r < 32; ++r) {
    if (x_[r] != o.x_[r]) return r;
  }
  return std::nullopt;
}

Priv trap_target(const ArchState& s, const Trap& trap) {
  if (s.priv == Priv::M) return Priv::M;
  const uint64_t deleg = trap.is_interrupt ? s.csr.mideleg : s.csr.medeleg;
  return ((deleg >> trap.code()) & 1) ? Priv::S : Priv::M;
}

void enter_trap(ArchState& s, const Trap& trap) {
  auto& c = s.csr;
  const Priv target = trap_target(s, trap);
  s.reservation.reset();
  if (target == Priv::S) {
    c.scause = trap.cause;
    c.sepc = trap.pc & ~uint64_t{1};
    c.stval = trap.tval;
    uint64_t st = c.mstatus & ~(mstatus::kSPP | mstatus::kSPIE | mstatus::kSIE);
    if (s.priv == Priv::S) st |= mstatus::kSPP;
    if (c.mstatus & mstatus::kSIE) st |= mstatus::kSPIE;
    c.mstatus = st;
    s.priv = Priv::S;
    const uint64_t base = c.stvec & ~uint64_t{3};
    s.pc = ((c.stvec & 1) && trap.is_interrupt) ? base + 4 * trap.code() : base;
    return;
  }
  c.mcause = trap.cause;
  c.mepc = trap.pc & ~uint64_t{1};
  c.mtval = trap.tval;
  uint64_t st = c.mstatus & ~(mstatus::kMPP | mstatus::kMPIE | mstatus::kMIE);
  st |= static_cast<uint64_t>(s.priv) << mstatus::kMPPShift;
  if (c.mstatus & mstatus::kMIE) st |= mstatus::kMPIE;
  c.mstatus = st;
  s.priv = Priv::M;
  const uint64_t base = c.mtvec & ~uint64_t{3};
  s.pc = ((c.mtvec & 1) && trap.is_interrupt) ? base + 4 * trap.code() : base;
}

bool exec_mret(ArchState& s) {
  if (s.priv != Priv::M) return false;
  auto& c = s.csr;
  const Priv next = c.mpp();
  uint64_t st = c.mstatus & ~(mstatus::kMIE | mstatus::kMPP);
  if (c.mstatus & mstatus::kMPIE) st |= mstatus::kMIE;
  st |= mstatus::kMPIE;
  if (next != Priv::M) st &= ~mstatus::kMPRV;
  c.mstatus = st;
  s.priv = next;
  s.pc = c.mepc;
  return true;
}

bool exec_sret(ArchState& s) {
  if (s.priv == Priv::U) return false;
  auto& c = s.csr;
  if (s.priv == Priv::S && (c.mstatus & mstatus::kTSR)) return false;
  const Priv next = (c.mstatus & mstatus::kSPP) ? Priv::S : Priv::U;
  uint64_t st = c.mstatus & ~(mstatus::kSIE | mstatus::kSPP);
  if (c.mstatus & mstatus::kSPIE) st |= mstatus::kSIE;
  st |= mstatus::kSPIE;
  st &= ~mstatus::kMPRV;
  c.mstatus = st;
  s.priv = next;
  s.pc = c.sepc;
  return true;
}

std::optional<Trap> check_pending_interrupt(const ArchState& s, uint8_t lines) {
  CsrFile view = s.csr;
  view.irq_lines = lines;
  const uint64_t pending = view.mip() & s.csr.mie;
  if (pending == 0) return std::nullopt;

  const bool m_enabled = s.priv != Priv::M || (s.csr.mstatus & mstatus::kMIE);
  const bool s_enabled =
      s.priv == Priv::U || (s.priv == Priv::S && (s.csr.mstatus & mstatus::kSIE));

  static constexpr uint64_t kPriority[] = {
      cause::kMachineExternal,    cause::kMachineSoftware,    cause::kMachineTimer,
      cause::kSupervisorExternal, cause::kSupervisorSoftware, cause::kSupervisorTimer,
  };

  const uint64_t m_level = pending & ~s.csr.mideleg;
  if (m_enabled && m_level) {
    for (uint64_t code : kPriority) {
      if ((m_level >> code) & 1) return Trap::interrupt(code, s.pc);
    }
  }
  const uint64_t s_level = pending & s.csr.mideleg;
  if (s_enabled && s_level) {
    for (uint64_t code : kPriority) {
      if ((s_level >> code) & 1) return Trap::interrupt(code, s.pc);
    }
  }
  return std::nullopt;
}

}  // namespace rvsim
