#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "rvsim/isa/types.hpp"

namespace rvsim {

enum class InstClass : uint8_t {
  ALU,
  BRANCH,
  JAL,
  JALR,
  LOAD,
  STORE,
  MUL,
  DIV,
  CSR,
  FENCE,
  FENCE_I,
  SFENCE_VMA,
  SYSTEM,  // ecall, ebreak, mret, sret, wfi
  AMO,
  ILLEGAL,
};

enum class FuKind : uint8_t { ALU, BranchUnit, LSU, Mult, CSRUnit, None };

enum class Op : uint8_t {
  ILLEGAL,
  LUI, AUIPC, JAL, JALR,
  BEQ, BNE, BLT, BGE, BLTU, BGEU,
  LB, LH, LW, LD, LBU, LHU, LWU,
  SB, SH, SW, SD,
  ADDI, SLTI, SLTIU, XORI, ORI, ANDI, SLLI, SRLI, SRAI,
  ADD, SUB, SLL, SLT, SLTU, XOR, SRL, SRA, OR, AND,
  ADDIW, SLLIW, SRLIW, SRAIW,
  ADDW, SUBW, SLLW, SRLW, SRAW,
  MUL, MULH, MULHSU, MULHU, DIV, DIVU, REM, REMU,
  MULW, DIVW, DIVUW, REMW, REMUW,
  FENCE, FENCE_I,
  ECALL, EBREAK, MRET, SRET, WFI, SFENCE_VMA,
  CSRRW, CSRRS, CSRRC, CSRRWI, CSRRSI, CSRRCI,
  LR_W, SC_W, AMOSWAP_W, AMOADD_W, AMOXOR_W, AMOAND_W, AMOOR_W,
  AMOMIN_W, AMOMAX_W, AMOMINU_W, AMOMAXU_W,
  LR_D, SC_D, AMOSWAP_D, AMOADD_D, AMOXOR_D, AMOAND_D, AMOOR_D,
  AMOMIN_D, AMOMAX_D, AMOMINU_D, AMOMAXU_D,
  kCount,
};

std::string_view op_name(Op op);
std::string_view class_name(InstClass klass);

/// One decoded instruction. Register fields a format does not use are zero.
struct DecodedInst {
  uint32_t raw = 0;  // 32-bit encoding; expanded form when compressed
  uint16_t parcel = 0;  // original 16-bit parcel when compressed
  bool is_compressed = false;
  InstClass klass = InstClass::ILLEGAL;
  Op op = Op::ILLEGAL;
  FuKind fu = FuKind::None;
  uint8_t rd = 0;
  uint8_t rs1 = 0;
  uint8_t rs2 = 0;
  int64_t imm = 0;
  uint16_t csr = 0;

  unsigned length() const { return is_compressed ? 2 : 4; }
  bool reads_rs1() const;
  bool reads_rs2() const;
  bool writes_rd() const;
  bool is_control_flow() const {
    return klass == InstClass::BRANCH || klass == InstClass::JAL || klass == InstClass::JALR;
  }
  /// Instructions executed non-speculatively at commit (and which flush).
  bool is_serializing() const;
  /// Call/return shape per the standard link-register convention (x1/x5).
  bool is_call() const;
  bool is_return() const;
};

inline bool is_link_reg(unsigned r) { return r == 1 || r == 5; }

/// True when the low two bits mark a 16-bit parcel.
inline bool is_compressed_parcel(uint32_t bits) { return (bits & 3) != 3; }

/// 16-bit C-extension parcel to its 32-bit equivalent; nullopt for reserved
/// or unsupported (floating-point) encodings. Pre: low two bits != 0b11.
std::optional<uint32_t> expand_compressed(uint16_t parcel);

/// Decodes a 32-bit encoding. Unknown or disabled encodings yield ILLEGAL.
DecodedInst decode(uint32_t encoding, const IsaConfig& cfg);

/// Decodes whatever sits at a fetch address: a compressed parcel in the low
/// half, or a full 32-bit instruction.
DecodedInst decode_parcel(uint32_t bits, const IsaConfig& cfg);

}  // namespace rvsim
