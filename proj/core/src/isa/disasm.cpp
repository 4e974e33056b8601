#include "rvsim/isa/disasm.hpp"

#include <array>

#include <fmt/format.h>

namespace rvsim {

namespace {

constexpr std::array<std::string_view, 32> kAbiNames = {
    "zero", "ra", "sp", "gp", "tp",  "t0",  "t1", "t2", "s0", "s1", "a0",
    "a1",   "a2", "a3", "a4", "a5",  "a6",  "a7", "s2", "s3", "s4", "s5",
    "s6",   "s7", "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6"};

std::string mnemonic(Op op) { return std::string(op_name(op)); }

}  // namespace

std::string_view reg_name(unsigned r) { return r < 32 ? kAbiNames[r] : "?"; }

std::string disassemble(const DecodedInst& in, uint64_t pc) {
  const std::string m = mnemonic(in.op);
  const auto rd = reg_name(in.rd);
  const auto rs1 = reg_name(in.rs1);
  const auto rs2 = reg_name(in.rs2);
  switch (in.klass) {
    case InstClass::ILLEGAL:
      return in.is_compressed ? fmt::format("illegal 0x{:04x}", in.parcel)
                              : fmt::format("illegal 0x{:08x}", in.raw);
    case InstClass::ALU:
      if (in.op == Op::LUI || in.op == Op::AUIPC) {
        return fmt::format("{} {}, 0x{:x}", m, rd, (static_cast<uint64_t>(in.imm) >> 12) & 0xfffff);
      }
      if (in.reads_rs2()) return fmt::format("{} {}, {}, {}", m, rd, rs1, rs2);
      return fmt::format("{} {}, {}, {}", m, rd, rs1, in.imm);
    case InstClass::MUL:
    case InstClass::DIV:
      return fmt::format("{} {}, {}, {}", m, rd, rs1, rs2);
    case InstClass::BRANCH:
      return fmt::format("{} {}, {}, 0x{:x}", m, rs1, rs2, pc + static_cast<uint64_t>(in.imm));
    case InstClass::JAL:
      return fmt::format("jal {}, 0x{:x}", rd, pc + static_cast<uint64_t>(in.imm));
    case InstClass::JALR:
      return fmt::format("jalr {}, {}({})", rd, in.imm, rs1);
    case InstClass::LOAD:
      return fmt::format("{} {}, {}({})", m, rd, in.imm, rs1);
    case InstClass::STORE:
      return fmt::format("{} {}, {}({})", m, rs2, in.imm, rs1);
    case InstClass::CSR:
      if (in.op == Op::CSRRWI || in.op == Op::CSRRSI || in.op == Op::CSRRCI) {
        return fmt::format("{} {}, 0x{:03x}, {}", m, rd, in.csr, in.imm);
      }
      return fmt::format("{} {}, 0x{:03x}, {}", m, rd, in.csr, rs1);
    case InstClass::AMO:
      if (in.op == Op::LR_W || in.op == Op::LR_D) return fmt::format("{} {}, ({})", m, rd, rs1);
      return fmt::format("{} {}, {}, ({})", m, rd, rs2, rs1);
    case InstClass::SFENCE_VMA:
      return fmt::format("sfence.vma {}, {}", rs1, rs2);
    case InstClass::FENCE:
    case InstClass::FENCE_I:
    case InstClass::SYSTEM:
      return m;
  }
  return m;
}

}  // namespace rvsim
