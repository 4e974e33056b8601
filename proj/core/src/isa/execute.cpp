#include "rvsim/isa/execute.hpp"

#include <limits>

namespace rvsim {

namespace {

using i64 = int64_t;
using u64 = uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

u64 sext32(u64 v) { return static_cast<u64>(static_cast<i64>(static_cast<int32_t>(v))); }

constexpr u64 kPpnMask = (u64{1} << 44) - 1;

}  // namespace

uint64_t alu_compute(Op op, uint64_t a, uint64_t b, uint64_t pc) {
  switch (op) {
    case Op::LUI: return b;
    case Op::AUIPC: return pc + b;
    case Op::ADD: case Op::ADDI: return a + b;
    case Op::SUB: return a - b;
    case Op::SLT: case Op::SLTI: return static_cast<i64>(a) < static_cast<i64>(b) ? 1 : 0;
    case Op::SLTU: case Op::SLTIU: return a < b ? 1 : 0;
    case Op::XOR: case Op::XORI: return a ^ b;
    case Op::OR: case Op::ORI: return a | b;
    case Op::AND: case Op::ANDI: return a & b;
    case Op::SLL: case Op::SLLI: return a << (b & 63);
    case Op::SRL: case Op::SRLI: return a >> (b & 63);
    case Op::SRA: case Op::SRAI: return static_cast<u64>(static_cast<i64>(a) >> (b & 63));
    case Op::ADDW: case Op::ADDIW: return sext32(a + b);
    case Op::SUBW: return sext32(a - b);
    case Op::SLLW: case Op::SLLIW: return sext32(static_cast<uint32_t>(a) << (b & 31));
    case Op::SRLW: case Op::SRLIW: return sext32(static_cast<uint32_t>(a) >> (b & 31));
    case Op::SRAW: case Op::SRAIW:
      return sext32(static_cast<u64>(static_cast<int32_t>(a) >> (b & 31)));
    default: return 0;
  }
}

bool branch_taken(Op op, uint64_t a, uint64_t b) {
  switch (op) {
    case Op::BEQ: return a == b;
    case Op::BNE: return a != b;
    case Op::BLT: return static_cast<i64>(a) < static_cast<i64>(b);
    case Op::BGE: return static_cast<i64>(a) >= static_cast<i64>(b);
    case Op::BLTU: return a < b;
    case Op::BGEU: return a >= b;
    default: return false;
  }
}

uint64_t muldiv_compute(Op op, uint64_t a, uint64_t b) {
  const auto sa = static_cast<i64>(a);
  const auto sb = static_cast<i64>(b);
  constexpr i64 kMin = std::numeric_limits<i64>::min();
  switch (op) {
    case Op::MUL: return a * b;
    case Op::MULH: return static_cast<u64>((static_cast<i128>(sa) * static_cast<i128>(sb)) >> 64);
    case Op::MULHSU:
      return static_cast<u64>((static_cast<i128>(sa) * static_cast<i128>(static_cast<u128>(b))) >>
                              64);
    case Op::MULHU: return static_cast<u64>((static_cast<u128>(a) * static_cast<u128>(b)) >> 64);
    case Op::DIV:
      if (b == 0) return ~u64{0};
      if (sa == kMin && sb == -1) return a;
      return static_cast<u64>(sa / sb);
    case Op::DIVU: return b == 0 ? ~u64{0} : a / b;
    case Op::REM:
      if (b == 0) return a;
      if (sa == kMin && sb == -1) return 0;
      return static_cast<u64>(sa % sb);
    case Op::REMU: return b == 0 ? a : a % b;
    case Op::MULW: return sext32(a * b);
    case Op::DIVW: {
      const auto x = static_cast<int32_t>(a);
      const auto y = static_cast<int32_t>(b);
      if (y == 0) return ~u64{0};
      if (x == std::numeric_limits<int32_t>::min() && y == -1) return sext32(static_cast<u64>(x));
      return sext32(static_cast<u64>(static_cast<i64>(x / y)));
    }
    case Op::DIVUW: {
      const auto x = static_cast<uint32_t>(a);
      const auto y = static_cast<uint32_t>(b);
      return y == 0 ? ~u64{0} : sext32(x / y);
    }
    case Op::REMW: {
      const auto x = static_cast<int32_t>(a);
      const auto y = static_cast<int32_t>(b);
      if (y == 0) return sext32(static_cast<u64>(x));
      if (x == std::numeric_limits<int32_t>::min() && y == -1) return 0;
      return sext32(static_cast<u64>(static_cast<i64>(x % y)));
    }
    case Op::REMUW: {
      const auto x = static_cast<uint32_t>(a);
      const auto y = static_cast<uint32_t>(b);
      return y == 0 ? sext32(x) : sext32(x % y);
    }
    default: return 0;
  }
}

unsigned mem_width(Op op) {
  switch (op) {
    case Op::LB: case Op::LBU: case Op::SB: return 1;
    case Op::LH: case Op::LHU: case Op::SH: return 2;
    case Op::LW: case Op::LWU: case Op::SW: return 4;
    case Op::LD: case Op::SD: return 8;
    default: break;
  }
  if (op >= Op::LR_W && op <= Op::AMOMAXU_W) return 4;
  if (op >= Op::LR_D && op <= Op::AMOMAXU_D) return 8;
  return 0;
}

uint64_t load_extend(Op op, uint64_t raw) {
  switch (op) {
    case Op::LB: return static_cast<u64>(sign_extend(raw, 8));
    case Op::LH: return static_cast<u64>(sign_extend(raw, 16));
    case Op::LW: return sext32(raw);
    case Op::LBU: return raw & 0xff;
    case Op::LHU: return raw & 0xffff;
    case Op::LWU: return raw & 0xffffffffu;
    default: break;
  }
  if (op >= Op::LR_W && op <= Op::AMOMAXU_W) return sext32(raw);
  return raw;
}

bool is_load_reserved(Op op) { return op == Op::LR_W || op == Op::LR_D; }
bool is_store_conditional(Op op) { return op == Op::SC_W || op == Op::SC_D; }

uint64_t amo_compute(Op op, uint64_t mem_value, uint64_t src) {
  const bool word = mem_width(op) == 4;
  const u64 a = word ? sext32(mem_value) : mem_value;
  const u64 b = word ? sext32(src) : src;
  u64 r = 0;
  switch (op) {
    case Op::AMOSWAP_W: case Op::AMOSWAP_D: r = b; break;
    case Op::AMOADD_W: case Op::AMOADD_D: r = a + b; break;
    case Op::AMOXOR_W: case Op::AMOXOR_D: r = a ^ b; break;
    case Op::AMOAND_W: case Op::AMOAND_D: r = a & b; break;
    case Op::AMOOR_W: case Op::AMOOR_D: r = a | b; break;
    case Op::AMOMIN_W: case Op::AMOMIN_D:
      r = static_cast<i64>(a) < static_cast<i64>(b) ? a : b;
      break;
    case Op::AMOMAX_W: case Op::AMOMAX_D:
      r = static_cast<i64>(a) > static_cast<i64>(b) ? a : b;
      break;
    case Op::AMOMINU_W: case Op::AMOMINU_D:
      if (word) r = static_cast<uint32_t>(a) < static_cast<uint32_t>(b) ? a : b;
      else r = a < b ? a : b;
      break;
    case Op::AMOMAXU_W: case Op::AMOMAXU_D:
      if (word) r = static_cast<uint32_t>(a) > static_cast<uint32_t>(b) ? a : b;
      else r = a > b ? a : b;
      break;
    default: break;
  }
  return word ? (r & 0xffffffffu) : r;
}

std::variant<uint64_t, Trap> reference_translate(const ArchState& s, uint64_t vaddr,
                                                 AccessType access, Priv priv,
                                                 const Memory& mem, uint64_t pc) {
  if (!s.translation_active(priv)) return vaddr;
  const auto fault = [&] { return Trap::exception(page_fault_cause(access), pc, vaddr); };

  if (static_cast<u64>(sign_extend(vaddr, 39)) != vaddr) return fault();

  u64 table = s.csr.satp_ppn() << 12;
  for (int level = 2; level >= 0; --level) {
    const u64 vpn = (vaddr >> (12 + 9 * level)) & 0x1ff;
    const u64 pte_addr = table + vpn * 8;
    if (!mem.accessible(pte_addr, 8)) {
      return Trap::exception(access_fault_cause(access), pc, vaddr);
    }
    const u64 pte = mem.read(pte_addr, 8);
    const bool v = pte & 1, r = (pte >> 1) & 1, w = (pte >> 2) & 1, x = (pte >> 3) & 1;
    const bool u = (pte >> 4) & 1, a = (pte >> 6) & 1, d = (pte >> 7) & 1;
    if (!v || (!r && w) || (pte >> 54) != 0) return fault();
    const u64 ppn = (pte >> 10) & kPpnMask;
    if (!r && !x) {
      table = ppn << 12;
      continue;
    }
    if (level > 0 && (ppn & ((u64{1} << (9 * level)) - 1)) != 0) return fault();

    if (priv == Priv::U && !u) return fault();
    if (priv == Priv::S && u) {
      if (access == AccessType::Fetch) return fault();
      if (!(s.csr.mstatus & mstatus::kSUM)) return fault();
    }
    const bool mxr = s.csr.mstatus & mstatus::kMXR;
    switch (access) {
      case AccessType::Fetch:
        if (!x) return fault();
        break;
      case AccessType::Load:
        if (!(r || (mxr && x))) return fault();
        break;
      case AccessType::Store:
        if (!w) return fault();
        break;
    }
    if (!a || (access == AccessType::Store && !d)) return fault();

    const unsigned offset_bits = 12 + 9 * level;
    const u64 offset_mask = (u64{1} << offset_bits) - 1;
    return ((ppn << 12) & ~offset_mask) | (vaddr & offset_mask);
  }
  return fault();
}

namespace {

struct DataAddr {
  uint64_t paddr = 0;
  std::optional<Trap> trap;
};

DataAddr data_address(const ArchState& s, uint64_t vaddr, unsigned width, AccessType access,
                      const Memory& mem) {
  if (vaddr % width != 0) {
    return {0, Trap::exception(misaligned_cause(access), s.pc, vaddr)};
  }
  auto t = reference_translate(s, vaddr, access, s.data_priv(), mem, s.pc);
  if (auto* trap = std::get_if<Trap>(&t)) return {0, *trap};
  const u64 paddr = std::get<u64>(t);
  if (!mem.accessible(paddr, width)) {
    return {0, Trap::exception(access_fault_cause(access), s.pc, vaddr)};
  }
  return {paddr, std::nullopt};
}

ExecOutcome raise(ArchState& s, const Trap& trap) {
  enter_trap(s, trap);
  ExecOutcome out;
  out.trap = trap;
  return out;
}

bool target_misaligned(uint64_t target, const IsaConfig& cfg) {
  return cfg.ext_c ? (target & 1) != 0 : (target & 3) != 0;
}

}  // namespace

ExecOutcome exec_functional(ArchState& s, const DecodedInst& inst, Memory& mem,
                            const IsaConfig& cfg) {
  ExecOutcome out;
  const u64 pc = s.pc;
  const u64 next_pc = pc + inst.length();
  const u64 a = s.reg(inst.rs1);
  const u64 b = s.reg(inst.rs2);
  const auto illegal = [&] {
    return raise(s, Trap::exception(cause::kIllegalInstr, pc,
                                    inst.is_compressed ? inst.parcel : inst.raw));
  };
  const auto write_rd = [&](u64 v) {
    if (inst.rd != 0) {
      s.set_reg(inst.rd, v);
      out.reg_write = RegWrite{inst.rd, v};
    }
  };

  switch (inst.klass) {
    case InstClass::ILLEGAL:
      return illegal();

    case InstClass::ALU:
      write_rd(alu_compute(inst.op, a, inst.reads_rs2() ? b : static_cast<u64>(inst.imm), pc));
      s.pc = next_pc;
      return out;

    case InstClass::MUL:
    case InstClass::DIV:
      write_rd(muldiv_compute(inst.op, a, b));
      s.pc = next_pc;
      return out;

    case InstClass::BRANCH: {
      if (!branch_taken(inst.op, a, b)) {
        s.pc = next_pc;
        return out;
      }
      const u64 target = pc + static_cast<u64>(inst.imm);
      if (target_misaligned(target, cfg)) {
        return raise(s, Trap::exception(cause::kInstrMisaligned, pc, target));
      }
      s.pc = target;
      return out;
    }

    case InstClass::JAL:
    case InstClass::JALR: {
      const u64 target = inst.klass == InstClass::JAL ? pc + static_cast<u64>(inst.imm)
                                                      : (a + static_cast<u64>(inst.imm)) & ~u64{1};
      if (target_misaligned(target, cfg)) {
        return raise(s, Trap::exception(cause::kInstrMisaligned, pc, target));
      }
      write_rd(next_pc);
      s.pc = target;
      return out;
    }

    case InstClass::LOAD: {
      const unsigned width = mem_width(inst.op);
      const u64 vaddr = a + static_cast<u64>(inst.imm);
      const auto addr = data_address(s, vaddr, width, AccessType::Load, mem);
      if (addr.trap) return raise(s, *addr.trap);
      const u64 raw = mem.read(addr.paddr, width);
      out.load = MemAccess{vaddr, addr.paddr, raw, static_cast<uint8_t>(width), false};
      write_rd(load_extend(inst.op, raw));
      s.pc = next_pc;
      return out;
    }

    case InstClass::STORE: {
      const unsigned width = mem_width(inst.op);
      const u64 vaddr = a + static_cast<u64>(inst.imm);
      const auto addr = data_address(s, vaddr, width, AccessType::Store, mem);
      if (addr.trap) return raise(s, *addr.trap);
      const u64 data = width == 8 ? b : (b & ((u64{1} << (8 * width)) - 1));
      mem.write(addr.paddr, width, data);
      out.store = MemAccess{vaddr, addr.paddr, data, static_cast<uint8_t>(width), true};
      s.pc = next_pc;
      return out;
    }

    case InstClass::AMO: {
      const unsigned width = mem_width(inst.op);
      const bool lr = is_load_reserved(inst.op);
      const AccessType access = lr ? AccessType::Load : AccessType::Store;
      const auto addr = data_address(s, a, width, access, mem);
      if (addr.trap) return raise(s, *addr.trap);
      const u64 mask = width == 8 ? ~u64{0} : 0xffffffffu;
      if (lr) {
        const u64 raw = mem.read(addr.paddr, width);
        out.load = MemAccess{a, addr.paddr, raw, static_cast<uint8_t>(width), false};
        s.reservation = addr.paddr;
        write_rd(load_extend(inst.op, raw));
      } else if (is_store_conditional(inst.op)) {
        const bool ok = s.reservation && *s.reservation == addr.paddr;
        s.reservation.reset();
        if (ok) {
          mem.write(addr.paddr, width, b & mask);
          out.store = MemAccess{a, addr.paddr, b & mask, static_cast<uint8_t>(width), true};
        }
        write_rd(ok ? 0 : 1);
      } else {
        const u64 raw = mem.read(addr.paddr, width);
        const u64 next = amo_compute(inst.op, raw, b);
        mem.write(addr.paddr, width, next);
        out.load = MemAccess{a, addr.paddr, raw, static_cast<uint8_t>(width), false};
        out.store = MemAccess{a, addr.paddr, next, static_cast<uint8_t>(width), true};
        write_rd(load_extend(inst.op, raw));
      }
      s.pc = next_pc;
      return out;
    }

    case InstClass::CSR: {
      const bool imm_form = inst.op == Op::CSRRWI || inst.op == Op::CSRRSI || inst.op == Op::CSRRCI;
      const u64 src = imm_form ? static_cast<u64>(inst.imm) : a;
      const bool is_write_op = inst.op == Op::CSRRW || inst.op == Op::CSRRWI;
      const bool does_write = is_write_op || (imm_form ? inst.imm != 0 : inst.rs1 != 0);
      const bool does_read = !is_write_op || inst.rd != 0;

      u64 old = 0;
      if (does_read || does_write) {
        auto value = s.csr.read(inst.csr, s.priv);
        if (!value) return illegal();
        old = *value;
      }
      if (does_write) {
        u64 next = src;
        if (inst.op == Op::CSRRS || inst.op == Op::CSRRSI) next = old | src;
        if (inst.op == Op::CSRRC || inst.op == Op::CSRRCI) next = old & ~src;
        if (!s.csr.write(inst.csr, next, s.priv)) return illegal();
      }
      write_rd(old);
      s.pc = next_pc;
      return out;
    }

    case InstClass::FENCE:
    case InstClass::FENCE_I:
      s.pc = next_pc;
      return out;

    case InstClass::SFENCE_VMA:
      if (s.priv == Priv::U || (s.priv == Priv::S && (s.csr.mstatus & mstatus::kTVM))) {
        return illegal();
      }
      s.pc = next_pc;
      return out;

    case InstClass::SYSTEM:
      switch (inst.op) {
        case Op::ECALL: {
          const u64 code = s.priv == Priv::U   ? cause::kEcallU
                           : s.priv == Priv::S ? cause::kEcallS
                                               : cause::kEcallM;
          return raise(s, Trap::exception(code, pc, 0));
        }
        case Op::EBREAK:
          return raise(s, Trap::exception(cause::kBreakpoint, pc, pc));
        case Op::MRET:
          if (!exec_mret(s)) return illegal();
          return out;
        case Op::SRET:
          if (!exec_sret(s)) return illegal();
          return out;
        case Op::WFI:
          if (s.priv == Priv::U || (s.priv == Priv::S && (s.csr.mstatus & mstatus::kTW))) {
            return illegal();
          }
          s.pc = next_pc;
          return out;
        default:
          return illegal();
      }
  }
  return illegal();
}

FetchOutcome fetch_functional(const ArchState& s, const Memory& mem, const IsaConfig& cfg) {
  FetchOutcome out;
  const u64 pc = s.pc;
  auto t = reference_translate(s, pc, AccessType::Fetch, s.priv, mem, pc);
  if (auto* trap = std::get_if<Trap>(&t)) {
    out.trap = *trap;
    return out;
  }
  const u64 paddr = std::get<u64>(t);
  if (!mem.accessible(paddr, 2)) {
    out.trap = Trap::exception(cause::kInstrAccessFault, pc, pc);
    return out;
  }
  out.paddr = paddr;
  const auto lo = static_cast<uint32_t>(mem.read(paddr, 2));
  if (is_compressed_parcel(lo)) {
    out.inst = decode_parcel(lo, cfg);
    return out;
  }
  u64 hi_paddr = paddr + 2;
  if (((pc + 2) & 0xfff) == 0) {
    auto t2 = reference_translate(s, pc + 2, AccessType::Fetch, s.priv, mem, pc);
    if (auto* trap = std::get_if<Trap>(&t2)) {
      out.trap = *trap;
      return out;
    }
    hi_paddr = std::get<u64>(t2);
  }
  if (!mem.accessible(hi_paddr, 2)) {
    out.trap = Trap::exception(cause::kInstrAccessFault, pc, pc + 2);
    return out;
  }
  const auto hi = static_cast<uint32_t>(mem.read(hi_paddr, 2));
  out.inst = decode_parcel(lo | (hi << 16), cfg);
  return out;
}

FunctionalHart::FunctionalHart(Memory& mem, const IsaConfig& cfg)
    : mem_(mem), cfg_(cfg), state_(cfg) {}

FunctionalHart::Step FunctionalHart::step() {
  Step st;
  st.pc = state_.pc;
  if (auto_counters_) {
    state_.csr.counters.cycle = retired_;
    state_.csr.counters.instret = retired_;
  }
  const FetchOutcome f = fetch_functional(state_, mem_, cfg_);
  if (f.trap) {
    enter_trap(state_, *f.trap);
    st.outcome.trap = f.trap;
    return st;
  }
  st.inst = f.inst;
  st.outcome = exec_functional(state_, *f.inst, mem_, cfg_);
  if (!st.outcome.trap) ++retired_;
  return st;
}

void FunctionalHart::take_trap(const Trap& trap) { enter_trap(state_, trap); }

}  // namespace rvsim
