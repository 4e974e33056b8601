#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "encoder.hpp"
#include "oracles.hpp"
#include "rvsim/isa/decode.hpp"
#include "rvsim/isa/disasm.hpp"
#include "rvsim/isa/execute.hpp"
#include "rvsim/mmu/sparse_memory.hpp"

using namespace rvsim;
namespace enc = rvtest::enc;

namespace {

const IsaConfig kDefault{};

IsaConfig with_atomics() {
  IsaConfig c;
  c.ext_a = true;
  return c;
}

void expect_same_fields(const DecodedInst& a, const DecodedInst& b) {
  EXPECT_EQ(a.raw, b.raw);
  EXPECT_EQ(a.klass, b.klass);
  EXPECT_EQ(a.op, b.op);
  EXPECT_EQ(a.fu, b.fu);
  EXPECT_EQ(a.rd, b.rd);
  EXPECT_EQ(a.rs1, b.rs1);
  EXPECT_EQ(a.rs2, b.rs2);
  EXPECT_EQ(a.imm, b.imm);
  EXPECT_EQ(a.csr, b.csr);
}

struct Machine {
  SparseMemory mem;
  ArchState s;
  Machine() { s.pc = 0x80000000; }

  ExecOutcome run(uint32_t word) {
    mem.write(s.pc, 4, word);
    const DecodedInst d = decode_parcel(word, kDefault);
    return exec_functional(s, d, mem, kDefault);
  }
};

}  // namespace

TEST(Expand, CanonicalIllegalParcel) {
  EXPECT_FALSE(expand_compressed(0x0000).has_value());
  const DecodedInst d = decode_parcel(0x0000, kDefault);
  EXPECT_EQ(d.klass, InstClass::ILLEGAL);
}

TEST(Expand, CNopIsAddiZero) {
  // 0x0001 is c.nop; only the all-zero parcel is the defined illegal one.
  ASSERT_TRUE(expand_compressed(0x0001).has_value());
  EXPECT_EQ(*expand_compressed(0x0001), 0x00000013u);
}

TEST(Expand, CLiA0Zero) {
  ASSERT_TRUE(expand_compressed(0x4501).has_value());
  EXPECT_EQ(*expand_compressed(0x4501), enc::addi(10, 0, 0));
  EXPECT_EQ(disassemble(decode_parcel(0x4501, kDefault), 0), "addi a0, zero, 0");
}

TEST(Expand, CJrRa) {
  ASSERT_TRUE(expand_compressed(0x8082).has_value());
  EXPECT_EQ(*expand_compressed(0x8082), enc::jalr(0, 1, 0));
  const DecodedInst d = decode_parcel(0x8082, kDefault);
  EXPECT_TRUE(d.is_compressed);
  EXPECT_TRUE(d.is_return());
}

TEST(Expand, ExhaustiveAgainstFieldReference) {
  unsigned checked = 0;
  for (uint32_t p = 0; p < 0x10000; ++p) {
    if (!is_compressed_parcel(p)) continue;
    const auto got = expand_compressed(static_cast<uint16_t>(p));
    const auto want = rvtest::ref_expand_rvc(static_cast<uint16_t>(p));
    ASSERT_EQ(got.has_value(), want.has_value()) << std::hex << "parcel 0x" << p;
    if (got) ASSERT_EQ(*got, *want) << std::hex << "parcel 0x" << p;
    ++checked;
  }
  EXPECT_EQ(checked, 49152u);
}

TEST(Expand, DecodeOfParcelMatchesDecodeOfExpansionForAllParcels) {
  for (uint32_t p = 0; p < 0x10000; ++p) {
    const DecodedInst via_parcel = decode_parcel(p, kDefault);
    if (!is_compressed_parcel(p)) {
      EXPECT_FALSE(via_parcel.is_compressed);
      continue;
    }
    ASSERT_TRUE(via_parcel.is_compressed) << std::hex << p;
    EXPECT_EQ(via_parcel.parcel, p);
    EXPECT_EQ(via_parcel.length(), 2u);
    const auto expanded = expand_compressed(static_cast<uint16_t>(p));
    if (!expanded) {
      EXPECT_EQ(via_parcel.klass, InstClass::ILLEGAL) << std::hex << p;
      continue;
    }
    SCOPED_TRACE(p);
    expect_same_fields(via_parcel, decode(*expanded, kDefault));
  }
}

TEST(Expand, CompressedParcelsDisabledWithoutC) {
  IsaConfig cfg;
  cfg.ext_c = false;
  EXPECT_EQ(decode_parcel(0x4501, cfg).klass, InstClass::ILLEGAL);
}

TEST(Decode, Nop) {
  const DecodedInst d = decode(0x00000013, kDefault);
  EXPECT_EQ(d.klass, InstClass::ALU);
  EXPECT_EQ(d.rd, 0);
  EXPECT_EQ(d.rs1, 0);
  EXPECT_EQ(d.imm, 0);
  EXPECT_FALSE(d.is_compressed);
}

TEST(Decode, MulA0A0A1) {
  const DecodedInst d = decode(0x02B50533, kDefault);
  EXPECT_EQ(d.klass, InstClass::MUL);
  EXPECT_EQ(d.fu, FuKind::Mult);
  EXPECT_EQ(d.rd, 10);
  EXPECT_EQ(d.rs1, 10);
  EXPECT_EQ(d.rs2, 11);
  EXPECT_EQ(disassemble(d, 0), "mul a0, a0, a1");
}

TEST(Decode, BackwardBne) {
  const DecodedInst d = decode(0xFE0518E3, kDefault);
  EXPECT_EQ(d.klass, InstClass::BRANCH);
  EXPECT_EQ(d.op, Op::BNE);
  EXPECT_EQ(d.imm, -16);
  EXPECT_EQ(d.rs1, 10);
  EXPECT_EQ(d.rs2, 0);
}

TEST(Decode, MulDivGatedByM) {
  IsaConfig no_m;
  no_m.ext_m = false;
  EXPECT_EQ(decode(0x02B50533, no_m).klass, InstClass::ILLEGAL);
  EXPECT_EQ(decode(enc::div(5, 6, 7), kDefault).klass, InstClass::DIV);
  EXPECT_EQ(decode(enc::div(5, 6, 7), no_m).klass, InstClass::ILLEGAL);
}

TEST(Decode, AtomicsGatedByA) {
  EXPECT_EQ(decode(enc::amoadd_d(5, 6, 7), kDefault).klass, InstClass::ILLEGAL);
  EXPECT_EQ(decode(enc::amoadd_d(5, 6, 7), with_atomics()).klass, InstClass::AMO);
  EXPECT_EQ(decode(enc::lr_d(5, 6), with_atomics()).op, Op::LR_D);
}

TEST(Decode, SystemAndFenceClasses) {
  EXPECT_EQ(decode(enc::ecall(), kDefault).klass, InstClass::SYSTEM);
  EXPECT_EQ(decode(enc::mret(), kDefault).klass, InstClass::SYSTEM);
  EXPECT_EQ(decode(enc::wfi(), kDefault).klass, InstClass::SYSTEM);
  EXPECT_EQ(decode(enc::fence(), kDefault).klass, InstClass::FENCE);
  EXPECT_EQ(decode(enc::fence_i(), kDefault).klass, InstClass::FENCE_I);
  EXPECT_EQ(decode(enc::sfence_vma(), kDefault).klass, InstClass::SFENCE_VMA);
  EXPECT_EQ(decode(enc::csrrw(1, 0x340, 2), kDefault).klass, InstClass::CSR);
  EXPECT_EQ(decode(enc::csrrw(1, 0x340, 2), kDefault).fu, FuKind::CSRUnit);
}

TEST(Decode, CallAndReturnShapes) {
  EXPECT_TRUE(decode(enc::jal(1, 64), kDefault).is_call());
  EXPECT_TRUE(decode(enc::jal(5, 64), kDefault).is_call());
  EXPECT_FALSE(decode(enc::jal(0, 64), kDefault).is_call());
  EXPECT_TRUE(decode(enc::jalr(0, 1, 0), kDefault).is_return());
  EXPECT_TRUE(decode(enc::jalr(0, 5, 0), kDefault).is_return());
  EXPECT_FALSE(decode(enc::jalr(0, 6, 0), kDefault).is_return());
  EXPECT_FALSE(decode(enc::jalr(1, 1, 0), kDefault).is_return());
}

TEST(Decode, UnknownOpcodeIsIllegal) {
  EXPECT_EQ(decode(0xffffffff, kDefault).klass, InstClass::ILLEGAL);
  EXPECT_EQ(decode(0x00000007, kDefault).klass, InstClass::ILLEGAL);  // flw
}

TEST(Exec, AddiWritesAndAdvances) {
  Machine m;
  const auto out = m.run(enc::addi(5, 0, 7));
  EXPECT_FALSE(out.trap);
  EXPECT_EQ(m.s.reg(5), 7u);
  EXPECT_EQ(m.s.pc, 0x80000004u);
}

TEST(Exec, X0IsHardwiredZero) {
  Machine m;
  m.run(enc::addi(0, 0, 99));
  EXPECT_EQ(m.s.reg(0), 0u);
  m.s.set_reg(0, 5);
  EXPECT_EQ(m.s.reg(0), 0u);
}

TEST(Exec, DivideByZeroGivesAllOnes) {
  Machine m;
  m.s.set_reg(6, 1234);
  const auto out = m.run(enc::div(5, 6, 0));
  EXPECT_FALSE(out.trap);
  EXPECT_EQ(m.s.reg(5), ~uint64_t{0});
  m.run(enc::rem(7, 6, 0));
  EXPECT_EQ(m.s.reg(7), 1234u);
  m.run(enc::divu(8, 6, 0));
  EXPECT_EQ(m.s.reg(8), ~uint64_t{0});
}

TEST(Exec, SignedOverflowDivision) {
  EXPECT_EQ(muldiv_compute(Op::DIV, uint64_t{1} << 63, ~uint64_t{0}), uint64_t{1} << 63);
  EXPECT_EQ(muldiv_compute(Op::REM, uint64_t{1} << 63, ~uint64_t{0}), 0u);
  EXPECT_EQ(muldiv_compute(Op::DIVW, 0x80000000u, ~uint64_t{0}), 0xffffffff80000000ull);
}

TEST(Exec, EcallFromUserTrapsToMachine) {
  Machine m;
  m.s.priv = Priv::U;
  m.s.csr.mtvec = 0x80001000;
  const uint64_t pc = m.s.pc;
  const auto out = m.run(enc::ecall());
  ASSERT_TRUE(out.trap);
  EXPECT_EQ(out.trap->cause, cause::kEcallU);
  EXPECT_EQ(m.s.priv, Priv::M);
  EXPECT_EQ(m.s.pc, 0x80001000u);
  EXPECT_EQ(m.s.csr.mepc, pc);
  EXPECT_EQ(m.s.csr.mcause, cause::kEcallU);
  EXPECT_EQ(m.s.csr.mpp(), Priv::U);
}

TEST(Exec, EcallDelegatedToSupervisor) {
  Machine m;
  m.s.priv = Priv::U;
  m.s.csr.medeleg = 1u << cause::kEcallU;
  m.s.csr.stvec = 0x80002000;
  const auto out = m.run(enc::ecall());
  ASSERT_TRUE(out.trap);
  EXPECT_EQ(m.s.priv, Priv::S);
  EXPECT_EQ(m.s.pc, 0x80002000u);
  EXPECT_EQ(m.s.csr.scause, cause::kEcallU);
}

TEST(Exec, MisalignedLoadTraps) {
  Machine m;
  m.s.set_reg(6, 0x80200001);
  m.s.csr.mtvec = 0x80001000;
  const auto out = m.run(enc::ld(5, 6, 0));
  ASSERT_TRUE(out.trap);
  EXPECT_EQ(out.trap->cause, cause::kLoadMisaligned);
  EXPECT_EQ(m.s.csr.mtval, 0x80200001u);
}

TEST(Exec, TrapThenMretRestoresPrivilegeAndPc) {
  for (Priv from : {Priv::U, Priv::S, Priv::M}) {
    Machine m;
    m.s.priv = from;
    m.s.csr.mtvec = 0x80001000;
    m.s.csr.mstatus |= mstatus::kMIE;
    const uint64_t pc = m.s.pc;
    m.run(enc::ebreak());
    EXPECT_EQ(m.s.priv, Priv::M);
    EXPECT_EQ(m.s.csr.mstatus & mstatus::kMIE, 0u);
    ASSERT_TRUE(exec_mret(m.s));
    EXPECT_EQ(m.s.priv, from);
    EXPECT_EQ(m.s.pc, pc);
    EXPECT_NE(m.s.csr.mstatus & mstatus::kMIE, 0u);
  }
}

TEST(Exec, MretIllegalBelowMachine) {
  Machine m;
  m.s.priv = Priv::S;
  m.s.csr.mtvec = 0x80001000;
  const auto out = m.run(enc::mret());
  ASSERT_TRUE(out.trap);
  EXPECT_EQ(out.trap->cause, cause::kIllegalInstr);
}

TEST(Exec, SatpReservedModeWriteDropped) {
  ArchState s;
  ASSERT_TRUE(s.csr.write(csr::kSatp, (uint64_t{8} << 60) | 0x1234, Priv::M));
  EXPECT_EQ(s.csr.satp_mode(), 8u);
  s.csr.write(csr::kSatp, (uint64_t{9} << 60) | 0x5678, Priv::M);
  EXPECT_EQ(s.csr.satp_mode(), 8u);
  EXPECT_EQ(s.csr.satp_ppn(), 0x1234u);
}

TEST(Exec, UnlistedCsrReadsZeroUnlessStrict) {
  ArchState lax;
  EXPECT_EQ(lax.csr.read(0x7c0, Priv::M), std::optional<uint64_t>(0));
  IsaConfig strict;
  strict.strict_csr = true;
  ArchState s(strict);
  EXPECT_FALSE(s.csr.read(0x7c0, Priv::M).has_value());
}

TEST(Exec, DeterministicForSameInputs) {
  for (uint32_t word : {enc::mul(5, 6, 7), enc::divu(5, 6, 7), enc::sraw(5, 6, 7), enc::ld(5, 6, 8)}) {
    Machine a, b;
    for (unsigned r = 1; r < 32; ++r) {
      a.s.set_reg(r, 0x80200000 + r * 0x1111);
      b.s.set_reg(r, 0x80200000 + r * 0x1111);
    }
    a.mem.write(0x80200000 + 6 * 0x1111 + 8, 8, 42);
    b.mem.write(0x80200000 + 6 * 0x1111 + 8, 8, 42);
    a.s.set_reg(6, 0x80200000);
    b.s.set_reg(6, 0x80200000);
    a.run(word);
    b.run(word);
    EXPECT_TRUE(a.s.same_architectural_state(b.s));
  }
}

TEST(Exec, LrScPairAndReservationClearedOnTrap) {
  SparseMemory mem;
  ArchState s(with_atomics());
  s.pc = 0x80000000;
  s.csr.mtvec = 0x80001000;
  s.set_reg(6, 0x80200000);
  s.set_reg(7, 77);
  mem.write(0x80200000, 8, 5);
  exec_functional(s, decode(enc::lr_d(5, 6), with_atomics()), mem, with_atomics());
  EXPECT_EQ(s.reg(5), 5u);
  ASSERT_TRUE(s.reservation);
  exec_functional(s, decode(enc::ecall(), with_atomics()), mem, with_atomics());
  EXPECT_FALSE(s.reservation);
  exec_functional(s, decode(enc::sc_d(8, 6, 7), with_atomics()), mem, with_atomics());
  EXPECT_EQ(s.reg(8), 1u);
  EXPECT_EQ(mem.read(0x80200000, 8), 5u);
}

namespace {

// Priority order for the four wired lines.
std::optional<uint64_t> ref_interrupt(uint8_t lines, uint64_t mie, bool mie_global, Priv priv) {
  struct Src {
    uint8_t line;
    uint64_t code;
  };
  static constexpr std::array<Src, 4> kOrder = {{{irq::kMachineExternal, 11},
                                                 {irq::kMachineSoftware, 3},
                                                 {irq::kMachineTimer, 7},
                                                 {irq::kSupervisorExternal, 9}}};
  const bool enabled = priv != Priv::M || mie_global;
  if (!enabled) return std::nullopt;
  for (const Src& s : kOrder) {
    if ((lines & s.line) && (mie >> s.code & 1)) return s.code;
  }
  return std::nullopt;
}

}  // namespace

TEST(Interrupts, AllLinesLowGivesNone) {
  ArchState s;
  s.csr.mie = ~uint64_t{0};
  s.csr.mstatus |= mstatus::kMIE;
  EXPECT_FALSE(check_pending_interrupt(s, 0));
}

TEST(Interrupts, MachineTimer) {
  ArchState s;
  s.csr.mie = 1u << 7;
  s.csr.mstatus |= mstatus::kMIE;
  const auto t = check_pending_interrupt(s, irq::kMachineTimer);
  ASSERT_TRUE(t);
  EXPECT_TRUE(t->is_interrupt);
  EXPECT_EQ(t->code(), 7u);
}

TEST(Interrupts, ExternalBeatsSoftware) {
  ArchState s;
  s.csr.mie = ~uint64_t{0};
  s.csr.mstatus |= mstatus::kMIE;
  const auto t = check_pending_interrupt(s, irq::kMachineExternal | irq::kMachineSoftware);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->code(), 11u);
}

TEST(Interrupts, AllLineCombinationsMatchPriorityReference) {
  const std::array<uint64_t, 4> enables = {0, (1u << 11) | (1u << 3) | (1u << 7) | (1u << 9),
                                           (1u << 3) | (1u << 7), 1u << 9};
  for (Priv priv : {Priv::M, Priv::S, Priv::U}) {
    for (bool global : {false, true}) {
      for (uint64_t mie : enables) {
        for (uint8_t lines = 0; lines < 16; ++lines) {
          ArchState s;
          s.priv = priv;
          s.csr.mie = mie;
          if (global) s.csr.mstatus |= mstatus::kMIE;
          const auto got = check_pending_interrupt(s, lines);
          const auto want = ref_interrupt(lines, mie, global, priv);
          ASSERT_EQ(got.has_value(), want.has_value())
              << "lines " << int(lines) << " mie " << mie << " priv " << int(priv);
          if (got) EXPECT_EQ(got->code(), *want);
        }
      }
    }
  }
}

TEST(Interrupts, TakingInterruptEntersMachineMode) {
  ArchState s;
  s.priv = Priv::U;
  s.pc = 0x80000100;
  s.csr.mtvec = 0x80001000;
  s.csr.mie = 1u << 7;
  const auto t = check_pending_interrupt(s, irq::kMachineTimer);
  ASSERT_TRUE(t);
  enter_trap(s, *t);
  EXPECT_EQ(s.priv, Priv::M);
  EXPECT_EQ(s.pc, 0x80001000u);
  EXPECT_EQ(s.csr.mepc, 0x80000100u);
  EXPECT_EQ(s.csr.mcause, cause::kInterruptBit | 7);
}

TEST(FunctionalHart, RunsShortProgram) {
  SparseMemory mem;
  const std::vector<uint32_t> prog = {enc::addi(5, 0, 10), enc::addi(6, 0, 0), enc::add(6, 6, 5),
                                      enc::addi(5, 5, -1), enc::bne(5, 0, -8)};
  for (size_t i = 0; i < prog.size(); ++i) mem.write(0x80000000 + 4 * i, 4, prog[i]);
  FunctionalHart h(mem, kDefault);
  h.state().pc = 0x80000000;
  while (h.state().pc != 0x80000000 + 4 * prog.size()) h.step();
  EXPECT_EQ(h.state().reg(6), 55u);
  EXPECT_EQ(h.retired(), 2u + 3u * 10u);
}
