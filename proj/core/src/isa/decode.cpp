#include "rvsim/isa/decode.hpp"

#include <array>

namespace rvsim {

namespace {

constexpr std::array<std::string_view, static_cast<size_t>(Op::kCount)> kOpNames = {
    "illegal",
    "lui", "auipc", "jal", "jalr",
    "beq", "bne", "blt", "bge", "bltu", "bgeu",
    "lb", "lh", "lw", "ld", "lbu", "lhu", "lwu",
    "sb", "sh", "sw", "sd",
    "addi", "slti", "sltiu", "xori", "ori", "andi", "slli", "srli", "srai",
    "add", "sub", "sll", "slt", "sltu", "xor", "srl", "sra", "or", "and",
    "addiw", "slliw", "srliw", "sraiw",
    "addw", "subw", "sllw", "srlw", "sraw",
    "mul", "mulh", "mulhsu", "mulhu", "div", "divu", "rem", "remu",
    "mulw", "divw", "divuw", "remw", "remuw",
    "fence", "fence.i",
    "ecall", "ebreak", "mret", "sret", "wfi", "sfence.vma",
    "csrrw", "csrrs", "csrrc", "csrrwi", "csrrsi", "csrrci",
    "lr.w", "sc.w", "amoswap.w", "amoadd.w", "amoxor.w", "amoand.w", "amoor.w",
    "amomin.w", "amomax.w", "amominu.w", "amomaxu.w",
    "lr.d", "sc.d", "amoswap.d", "amoadd.d", "amoxor.d", "amoand.d", "amoor.d",
    "amomin.d", "amomax.d", "amominu.d", "amomaxu.d",
};

// Bit-field helpers.
constexpr uint32_t bits(uint32_t v, unsigned hi, unsigned lo) {
  return (v >> lo) & ((1u << (hi - lo + 1)) - 1);
}
constexpr uint32_t bit(uint32_t v, unsigned i) { return (v >> i) & 1u; }

// 32-bit encoders used by the compressed expander.
constexpr uint32_t enc_r(uint32_t opc, uint32_t rd, uint32_t f3, uint32_t rs1, uint32_t rs2,
                         uint32_t f7) {
  return (f7 << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | opc;
}
constexpr uint32_t enc_i(uint32_t opc, uint32_t rd, uint32_t f3, uint32_t rs1, int32_t imm) {
  return (static_cast<uint32_t>(imm & 0xfff) << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | opc;
}
constexpr uint32_t enc_s(uint32_t opc, uint32_t f3, uint32_t rs1, uint32_t rs2, int32_t imm) {
  const auto u = static_cast<uint32_t>(imm);
  return (bits(u, 11, 5) << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (bits(u, 4, 0) << 7) |
         opc;
}
constexpr uint32_t enc_b(uint32_t f3, uint32_t rs1, uint32_t rs2, int32_t imm) {
  const auto u = static_cast<uint32_t>(imm);
  return (bit(u, 12) << 31) | (bits(u, 10, 5) << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) |
         (bits(u, 4, 1) << 8) | (bit(u, 11) << 7) | 0x63;
}
constexpr uint32_t enc_u(uint32_t opc, uint32_t rd, int32_t imm) {
  return (static_cast<uint32_t>(imm) & 0xfffff000u) | (rd << 7) | opc;
}
constexpr uint32_t enc_j(uint32_t rd, int32_t imm) {
  const auto u = static_cast<uint32_t>(imm);
  return (bit(u, 20) << 31) | (bits(u, 10, 1) << 21) | (bit(u, 11) << 20) |
         (bits(u, 19, 12) << 12) | (rd << 7) | 0x6f;
}

constexpr int32_t sext32(uint32_t v, unsigned width) {
  const unsigned shift = 32 - width;
  return static_cast<int32_t>(v << shift) >> shift;
}

InstClass class_of(Op op) {
  switch (op) {
    case Op::ILLEGAL:
      return InstClass::ILLEGAL;
    case Op::JAL:
      return InstClass::JAL;
    case Op::JALR:
      return InstClass::JALR;
    case Op::BEQ: case Op::BNE: case Op::BLT: case Op::BGE: case Op::BLTU: case Op::BGEU:
      return InstClass::BRANCH;
    case Op::LB: case Op::LH: case Op::LW: case Op::LD: case Op::LBU: case Op::LHU: case Op::LWU:
      return InstClass::LOAD;
    case Op::SB: case Op::SH: case Op::SW: case Op::SD:
      return InstClass::STORE;
    case Op::MUL: case Op::MULH: case Op::MULHSU: case Op::MULHU: case Op::MULW:
      return InstClass::MUL;
    case Op::DIV: case Op::DIVU: case Op::REM: case Op::REMU:
    case Op::DIVW: case Op::DIVUW: case Op::REMW: case Op::REMUW:
      return InstClass::DIV;
    case Op::FENCE:
      return InstClass::FENCE;
    case Op::FENCE_I:
      return InstClass::FENCE_I;
    case Op::SFENCE_VMA:
      return InstClass::SFENCE_VMA;
    case Op::ECALL: case Op::EBREAK: case Op::MRET: case Op::SRET: case Op::WFI:
      return InstClass::SYSTEM;
    case Op::CSRRW: case Op::CSRRS: case Op::CSRRC:
    case Op::CSRRWI: case Op::CSRRSI: case Op::CSRRCI:
      return InstClass::CSR;
    default:
      break;
  }
  if (op >= Op::LR_W && op <= Op::AMOMAXU_D) return InstClass::AMO;
  return InstClass::ALU;
}

FuKind fu_of(InstClass k) {
  switch (k) {
    case InstClass::ALU: return FuKind::ALU;
    case InstClass::BRANCH:
    case InstClass::JAL:
    case InstClass::JALR: return FuKind::BranchUnit;
    case InstClass::LOAD:
    case InstClass::STORE:
    case InstClass::AMO: return FuKind::LSU;
    case InstClass::MUL:
    case InstClass::DIV: return FuKind::Mult;
    case InstClass::CSR:
    case InstClass::FENCE:
    case InstClass::FENCE_I:
    case InstClass::SFENCE_VMA:
    case InstClass::SYSTEM: return FuKind::CSRUnit;
    case InstClass::ILLEGAL: return FuKind::None;
  }
  return FuKind::None;
}

DecodedInst make(uint32_t raw, Op op, unsigned rd, unsigned rs1, unsigned rs2, int64_t imm) {
  DecodedInst d;
  d.raw = raw;
  d.op = op;
  d.klass = class_of(op);
  d.fu = fu_of(d.klass);
  d.rd = static_cast<uint8_t>(rd);
  d.rs1 = static_cast<uint8_t>(rs1);
  d.rs2 = static_cast<uint8_t>(rs2);
  d.imm = imm;
  return d;
}

DecodedInst illegal(uint32_t raw) {
  DecodedInst d;
  d.raw = raw;
  return d;
}

Op amo_op(uint32_t funct5, bool dword) {
  const Op w = [&] {
    switch (funct5) {
      case 0x02: return Op::LR_W;
      case 0x03: return Op::SC_W;
      case 0x01: return Op::AMOSWAP_W;
      case 0x00: return Op::AMOADD_W;
      case 0x04: return Op::AMOXOR_W;
      case 0x0c: return Op::AMOAND_W;
      case 0x08: return Op::AMOOR_W;
      case 0x10: return Op::AMOMIN_W;
      case 0x14: return Op::AMOMAX_W;
      case 0x18: return Op::AMOMINU_W;
      case 0x1c: return Op::AMOMAXU_W;
      default: return Op::ILLEGAL;
    }
  }();
  if (w == Op::ILLEGAL || !dword) return w;
  return static_cast<Op>(static_cast<unsigned>(w) + (static_cast<unsigned>(Op::LR_D) -
                                                       static_cast<unsigned>(Op::LR_W)));
}

}  // namespace

std::string_view op_name(Op op) { return kOpNames[static_cast<size_t>(op)]; }

std::string_view class_name(InstClass klass) {
  switch (klass) {
    case InstClass::ALU: return "ALU";
    case InstClass::BRANCH: return "BRANCH";
    case InstClass::JAL: return "JAL";
    case InstClass::JALR: return "JALR";
    case InstClass::LOAD: return "LOAD";
    case InstClass::STORE: return "STORE";
    case InstClass::MUL: return "MUL";
    case InstClass::DIV: return "DIV";
    case InstClass::CSR: return "CSR";
    case InstClass::FENCE: return "FENCE";
    case InstClass::FENCE_I: return "FENCE_I";
    case InstClass::SFENCE_VMA: return "SFENCE_VMA";
    case InstClass::SYSTEM: return "SYSTEM";
    case InstClass::AMO: return "AMO";
    case InstClass::ILLEGAL: return "ILLEGAL";
  }
  return "?";
}

bool DecodedInst::reads_rs1() const {
  switch (klass) {
    case InstClass::ILLEGAL:
    case InstClass::JAL:
    case InstClass::FENCE:
    case InstClass::FENCE_I:
    case InstClass::SYSTEM:
      return false;
    case InstClass::CSR:
      return op == Op::CSRRW || op == Op::CSRRS || op == Op::CSRRC;
    case InstClass::ALU:
      return op != Op::LUI && op != Op::AUIPC;
    default:
      return true;
  }
}

bool DecodedInst::reads_rs2() const {
  switch (klass) {
    case InstClass::BRANCH:
    case InstClass::STORE:
    case InstClass::MUL:
    case InstClass::DIV:
    case InstClass::SFENCE_VMA:
      return true;
    case InstClass::AMO:
      return op != Op::LR_W && op != Op::LR_D;
    case InstClass::ALU:
      switch (op) {
        case Op::ADD: case Op::SUB: case Op::SLL: case Op::SLT: case Op::SLTU: case Op::XOR:
        case Op::SRL: case Op::SRA: case Op::OR: case Op::AND: case Op::ADDW: case Op::SUBW:
        case Op::SLLW: case Op::SRLW: case Op::SRAW:
          return true;
        default:
          return false;
      }
    default:
      return false;
  }
}

bool DecodedInst::writes_rd() const {
  if (rd == 0) return false;
  switch (klass) {
    case InstClass::BRANCH:
    case InstClass::STORE:
    case InstClass::FENCE:
    case InstClass::FENCE_I:
    case InstClass::SFENCE_VMA:
    case InstClass::SYSTEM:
    case InstClass::ILLEGAL:
      return false;
    default:
      return true;
  }
}

bool DecodedInst::is_serializing() const {
  switch (klass) {
    case InstClass::CSR:
    case InstClass::FENCE:
    case InstClass::FENCE_I:
    case InstClass::SFENCE_VMA:
    case InstClass::SYSTEM:
      return true;
    default:
      return false;
  }
}

bool DecodedInst::is_call() const {
  return (klass == InstClass::JAL || klass == InstClass::JALR) && is_link_reg(rd);
}

bool DecodedInst::is_return() const {
  return klass == InstClass::JALR && rd == 0 && is_link_reg(rs1);
}

std::optional<uint32_t> expand_compressed(uint16_t parcel) {
  const uint32_t c = parcel;
  const uint32_t quadrant = c & 3;
  const uint32_t f3 = bits(c, 15, 13);
  const uint32_t rd = bits(c, 11, 7);
  const uint32_t rs2 = bits(c, 6, 2);
  const uint32_t rdp = bits(c, 4, 2) + 8;   // rd' / rs2'
  const uint32_t rs1p = bits(c, 9, 7) + 8;  // rs1' / rd'

  if (quadrant == 0) {
    switch (f3) {
      case 0: {  // c.addi4spn
        const uint32_t imm = (bits(c, 12, 11) << 4) | (bits(c, 10, 7) << 6) | (bit(c, 6) << 2) |
                             (bit(c, 5) << 3);
        if (imm == 0) return std::nullopt;
        return enc_i(0x13, rdp, 0, 2, static_cast<int32_t>(imm));
      }
      case 2: {  // c.lw
        const uint32_t imm = (bits(c, 12, 10) << 3) | (bit(c, 6) << 2) | (bit(c, 5) << 6);
        return enc_i(0x03, rdp, 2, rs1p, static_cast<int32_t>(imm));
      }
      case 3: {  // c.ld
        const uint32_t imm = (bits(c, 12, 10) << 3) | (bits(c, 6, 5) << 6);
        return enc_i(0x03, rdp, 3, rs1p, static_cast<int32_t>(imm));
      }
      case 6: {  // c.sw
        const uint32_t imm = (bits(c, 12, 10) << 3) | (bit(c, 6) << 2) | (bit(c, 5) << 6);
        return enc_s(0x23, 2, rs1p, rdp, static_cast<int32_t>(imm));
      }
      case 7: {  // c.sd
        const uint32_t imm = (bits(c, 12, 10) << 3) | (bits(c, 6, 5) << 6);
        return enc_s(0x23, 3, rs1p, rdp, static_cast<int32_t>(imm));
      }
      default:  // c.fld, c.fsd, reserved
        return std::nullopt;
    }
  }

  if (quadrant == 1) {
    const int32_t imm6 = sext32((bit(c, 12) << 5) | bits(c, 6, 2), 6);
    switch (f3) {
      case 0:  // c.addi / c.nop
        return enc_i(0x13, rd, 0, rd, imm6);
      case 1:  // c.addiw
        if (rd == 0) return std::nullopt;
        return enc_i(0x1b, rd, 0, rd, imm6);
      case 2:  // c.li
        return enc_i(0x13, rd, 0, 0, imm6);
      case 3: {
        if (rd == 2) {  // c.addi16sp
          const uint32_t u = (bit(c, 12) << 9) | (bit(c, 6) << 4) | (bit(c, 5) << 6) |
                             (bits(c, 4, 3) << 7) | (bit(c, 2) << 5);
          if (u == 0) return std::nullopt;
          return enc_i(0x13, 2, 0, 2, sext32(u, 10));
        }
        // c.lui
        const uint32_t u = (bit(c, 12) << 17) | (bits(c, 6, 2) << 12);
        if (u == 0) return std::nullopt;
        return enc_u(0x37, rd, sext32(u, 18));
      }
      case 4: {
        const uint32_t shamt = (bit(c, 12) << 5) | bits(c, 6, 2);
        switch (bits(c, 11, 10)) {
          case 0:  // c.srli
            return enc_i(0x13, rs1p, 5, rs1p, static_cast<int32_t>(shamt));
          case 1:  // c.srai
            return enc_i(0x13, rs1p, 5, rs1p, static_cast<int32_t>(shamt | 0x400));
          case 2:  // c.andi
            return enc_i(0x13, rs1p, 7, rs1p, imm6);
          default: {
            const uint32_t sel = bits(c, 6, 5);
            if (bit(c, 12) == 0) {
              switch (sel) {
                case 0: return enc_r(0x33, rs1p, 0, rs1p, rdp, 0x20);  // c.sub
                case 1: return enc_r(0x33, rs1p, 4, rs1p, rdp, 0);     // c.xor
                case 2: return enc_r(0x33, rs1p, 6, rs1p, rdp, 0);     // c.or
                default: return enc_r(0x33, rs1p, 7, rs1p, rdp, 0);    // c.and
              }
            }
            switch (sel) {
              case 0: return enc_r(0x3b, rs1p, 0, rs1p, rdp, 0x20);  // c.subw
              case 1: return enc_r(0x3b, rs1p, 0, rs1p, rdp, 0);     // c.addw
              default: return std::nullopt;
            }
          }
        }
      }
      case 5: {  // c.j
        const uint32_t u = (bit(c, 12) << 11) | (bit(c, 11) << 4) | (bits(c, 10, 9) << 8) |
                           (bit(c, 8) << 10) | (bit(c, 7) << 6) | (bit(c, 6) << 7) |
                           (bits(c, 5, 3) << 1) | (bit(c, 2) << 5);
        return enc_j(0, sext32(u, 12));
      }
      default: {  // c.beqz / c.bnez
        const uint32_t u = (bit(c, 12) << 8) | (bits(c, 11, 10) << 3) | (bits(c, 6, 5) << 6) |
                           (bits(c, 4, 3) << 1) | (bit(c, 2) << 5);
        return enc_b(f3 == 6 ? 0 : 1, rs1p, 0, sext32(u, 9));
      }
    }
  }

  if (quadrant == 2) {
    switch (f3) {
      case 0: {  // c.slli
        const uint32_t shamt = (bit(c, 12) << 5) | bits(c, 6, 2);
        return enc_i(0x13, rd, 1, rd, static_cast<int32_t>(shamt));
      }
      case 2: {  // c.lwsp
        if (rd == 0) return std::nullopt;
        const uint32_t u = (bit(c, 12) << 5) | (bits(c, 6, 4) << 2) | (bits(c, 3, 2) << 6);
        return enc_i(0x03, rd, 2, 2, static_cast<int32_t>(u));
      }
      case 3: {  // c.ldsp
        if (rd == 0) return std::nullopt;
        const uint32_t u = (bit(c, 12) << 5) | (bits(c, 6, 5) << 3) | (bits(c, 4, 2) << 6);
        return enc_i(0x03, rd, 3, 2, static_cast<int32_t>(u));
      }
      case 4: {
        if (bit(c, 12) == 0) {
          if (rs2 == 0) {  // c.jr
            if (rd == 0) return std::nullopt;
            return enc_i(0x67, 0, 0, rd, 0);
          }
          return enc_r(0x33, rd, 0, 0, rs2, 0);  // c.mv
        }
        if (rs2 == 0) {
          if (rd == 0) return 0x00100073u;      // c.ebreak
          return enc_i(0x67, 1, 0, rd, 0);      // c.jalr
        }
        return enc_r(0x33, rd, 0, rd, rs2, 0);  // c.add
      }
      case 6: {  // c.swsp
        const uint32_t u = (bits(c, 12, 9) << 2) | (bits(c, 8, 7) << 6);
        return enc_s(0x23, 2, 2, rs2, static_cast<int32_t>(u));
      }
      case 7: {  // c.sdsp
        const uint32_t u = (bits(c, 12, 10) << 3) | (bits(c, 9, 7) << 6);
        return enc_s(0x23, 3, 2, rs2, static_cast<int32_t>(u));
      }
      default:  // c.fldsp, c.fsdsp
        return std::nullopt;
    }
  }
  return std::nullopt;  // quadrant 3 is not a compressed parcel
}

DecodedInst decode(uint32_t raw, const IsaConfig& cfg) {
  if ((raw & 3) != 3 || bits(raw, 4, 2) == 7) return illegal(raw);

  const uint32_t opcode = bits(raw, 6, 0);
  const uint32_t rd = bits(raw, 11, 7);
  const uint32_t f3 = bits(raw, 14, 12);
  const uint32_t rs1 = bits(raw, 19, 15);
  const uint32_t rs2 = bits(raw, 24, 20);
  const uint32_t f7 = bits(raw, 31, 25);

  const int64_t imm_i = sign_extend(raw >> 20, 12);
  const int64_t imm_s = sign_extend((bits(raw, 31, 25) << 5) | bits(raw, 11, 7), 12);
  const int64_t imm_b = sign_extend((bit(raw, 31) << 12) | (bit(raw, 7) << 11) |
                                        (bits(raw, 30, 25) << 5) | (bits(raw, 11, 8) << 1),
                                    13);
  const int64_t imm_u = sign_extend(raw & 0xfffff000u, 32);
  const int64_t imm_j = sign_extend((bit(raw, 31) << 20) | (bits(raw, 19, 12) << 12) |
                                        (bit(raw, 20) << 11) | (bits(raw, 30, 21) << 1),
                                    21);

  switch (opcode) {
    case 0x37:
      return make(raw, Op::LUI, rd, 0, 0, imm_u);
    case 0x17:
      return make(raw, Op::AUIPC, rd, 0, 0, imm_u);
    case 0x6f:
      return make(raw, Op::JAL, rd, 0, 0, imm_j);
    case 0x67:
      if (f3 != 0) break;
      return make(raw, Op::JALR, rd, rs1, 0, imm_i);
    case 0x63: {
      static constexpr Op kBranch[8] = {Op::BEQ, Op::BNE, Op::ILLEGAL, Op::ILLEGAL,
                                        Op::BLT, Op::BGE, Op::BLTU,    Op::BGEU};
      if (kBranch[f3] == Op::ILLEGAL) break;
      return make(raw, kBranch[f3], 0, rs1, rs2, imm_b);
    }
    case 0x03: {
      static constexpr Op kLoad[8] = {Op::LB,  Op::LH,  Op::LW,  Op::LD,
                                      Op::LBU, Op::LHU, Op::LWU, Op::ILLEGAL};
      if (kLoad[f3] == Op::ILLEGAL) break;
      return make(raw, kLoad[f3], rd, rs1, 0, imm_i);
    }
    case 0x23: {
      static constexpr Op kStore[4] = {Op::SB, Op::SH, Op::SW, Op::SD};
      if (f3 > 3) break;
      return make(raw, kStore[f3], 0, rs1, rs2, imm_s);
    }
    case 0x13: {
      switch (f3) {
        case 0: return make(raw, Op::ADDI, rd, rs1, 0, imm_i);
        case 2: return make(raw, Op::SLTI, rd, rs1, 0, imm_i);
        case 3: return make(raw, Op::SLTIU, rd, rs1, 0, imm_i);
        case 4: return make(raw, Op::XORI, rd, rs1, 0, imm_i);
        case 6: return make(raw, Op::ORI, rd, rs1, 0, imm_i);
        case 7: return make(raw, Op::ANDI, rd, rs1, 0, imm_i);
        case 1:
          if (bits(raw, 31, 26) != 0) break;
          return make(raw, Op::SLLI, rd, rs1, 0, bits(raw, 25, 20));
        case 5:
          if (bits(raw, 31, 26) == 0) return make(raw, Op::SRLI, rd, rs1, 0, bits(raw, 25, 20));
          if (bits(raw, 31, 26) == 0x10) return make(raw, Op::SRAI, rd, rs1, 0, bits(raw, 25, 20));
          break;
      }
      break;
    }
    case 0x1b: {
      switch (f3) {
        case 0: return make(raw, Op::ADDIW, rd, rs1, 0, imm_i);
        case 1:
          if (f7 != 0) break;
          return make(raw, Op::SLLIW, rd, rs1, 0, rs2);
        case 5:
          if (f7 == 0) return make(raw, Op::SRLIW, rd, rs1, 0, rs2);
          if (f7 == 0x20) return make(raw, Op::SRAIW, rd, rs1, 0, rs2);
          break;
      }
      break;
    }
    case 0x33: {
      if (f7 == 0) {
        static constexpr Op kOp[8] = {Op::ADD, Op::SLL, Op::SLT, Op::SLTU,
                                      Op::XOR, Op::SRL, Op::OR,  Op::AND};
        return make(raw, kOp[f3], rd, rs1, rs2, 0);
      }
      if (f7 == 0x20) {
        if (f3 == 0) return make(raw, Op::SUB, rd, rs1, rs2, 0);
        if (f3 == 5) return make(raw, Op::SRA, rd, rs1, rs2, 0);
        break;
      }
      if (f7 == 1 && cfg.ext_m) {
        static constexpr Op kMul[8] = {Op::MUL, Op::MULH, Op::MULHSU, Op::MULHU,
                                       Op::DIV, Op::DIVU, Op::REM,    Op::REMU};
        return make(raw, kMul[f3], rd, rs1, rs2, 0);
      }
      break;
    }
    case 0x3b: {
      if (f7 == 0) {
        if (f3 == 0) return make(raw, Op::ADDW, rd, rs1, rs2, 0);
        if (f3 == 1) return make(raw, Op::SLLW, rd, rs1, rs2, 0);
        if (f3 == 5) return make(raw, Op::SRLW, rd, rs1, rs2, 0);
        break;
      }
      if (f7 == 0x20) {
        if (f3 == 0) return make(raw, Op::SUBW, rd, rs1, rs2, 0);
        if (f3 == 5) return make(raw, Op::SRAW, rd, rs1, rs2, 0);
        break;
      }
      if (f7 == 1 && cfg.ext_m) {
        static constexpr Op kMulW[8] = {Op::MULW,    Op::ILLEGAL, Op::ILLEGAL, Op::ILLEGAL,
                                        Op::DIVW,    Op::DIVUW,   Op::REMW,    Op::REMUW};
        if (kMulW[f3] == Op::ILLEGAL) break;
        return make(raw, kMulW[f3], rd, rs1, rs2, 0);
      }
      break;
    }
    case 0x0f:
      if (f3 == 0) return make(raw, Op::FENCE, 0, 0, 0, 0);
      if (f3 == 1) return make(raw, Op::FENCE_I, 0, 0, 0, 0);
      break;
    case 0x73: {
      if (f3 == 0) {
        switch (raw) {
          case 0x00000073u: return make(raw, Op::ECALL, 0, 0, 0, 0);
          case 0x00100073u: return make(raw, Op::EBREAK, 0, 0, 0, 0);
          case 0x30200073u: return make(raw, Op::MRET, 0, 0, 0, 0);
          case 0x10200073u: return make(raw, Op::SRET, 0, 0, 0, 0);
          case 0x10500073u: return make(raw, Op::WFI, 0, 0, 0, 0);
          default: break;
        }
        if (f7 == 0x09 && rd == 0) return make(raw, Op::SFENCE_VMA, 0, rs1, rs2, 0);
        break;
      }
      if (f3 == 4) break;
      static constexpr Op kCsr[8] = {Op::ILLEGAL, Op::CSRRW,  Op::CSRRS,  Op::CSRRC,
                                     Op::ILLEGAL, Op::CSRRWI, Op::CSRRSI, Op::CSRRCI};
      const bool uimm = f3 >= 5;
      DecodedInst d = make(raw, kCsr[f3], rd, uimm ? 0 : rs1, 0, uimm ? rs1 : 0);
      d.csr = static_cast<uint16_t>(raw >> 20);
      return d;
    }
    case 0x2f: {
      if (!cfg.ext_a || (f3 != 2 && f3 != 3)) break;
      const Op op = amo_op(raw >> 27, f3 == 3);
      if (op == Op::ILLEGAL) break;
      if ((op == Op::LR_W || op == Op::LR_D) && rs2 != 0) break;
      return make(raw, op, rd, rs1, (op == Op::LR_W || op == Op::LR_D) ? 0 : rs2, 0);
    }
    default:
      break;
  }
  return illegal(raw);
}

DecodedInst decode_parcel(uint32_t bits_in, const IsaConfig& cfg) {
  if (!is_compressed_parcel(bits_in)) return decode(bits_in, cfg);
  const auto parcel = static_cast<uint16_t>(bits_in & 0xffff);
  DecodedInst d;
  if (cfg.ext_c) {
    if (auto expanded = expand_compressed(parcel)) d = decode(*expanded, cfg);
  }
  if (d.klass == InstClass::ILLEGAL) d.raw = parcel;
  d.is_compressed = true;
  d.parcel = parcel;
  return d;
}

}  // namespace rvsim
