#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "encoder.hpp"

namespace rvtest {

// Memory layout shared by generated test programs.
inline constexpr uint64_t kCodeBase = 0x80000000;
inline constexpr uint64_t kTohost = 0x80100000;
inline constexpr uint64_t kDataBase = 0x80200000;
inline constexpr uint64_t kDataSize = 0x10000;
inline constexpr uint64_t kPageTableBase = 0x80400000;

/// Assembles a program with forward and backward labels.
class ProgramBuilder {
 public:
  using Label = size_t;

  explicit ProgramBuilder(uint64_t base = kCodeBase) : base_(base) {}

  uint64_t base() const { return base_; }
  uint64_t pc() const { return base_ + bytes_.size(); }
  size_t size() const { return bytes_.size(); }

  void emit(uint32_t word);
  void emit16(uint16_t parcel);

  Label label();
  void bind(Label l);
  Label here() {
    Label l = label();
    bind(l);
    return l;
  }
  uint64_t address(Label l) const;

  // Control flow to labels (resolved by finish()).
  void branch(uint32_t f3, uint32_t rs1, uint32_t rs2, Label target);
  void beq(uint32_t a, uint32_t b, Label t) { branch(0, a, b, t); }
  void bne(uint32_t a, uint32_t b, Label t) { branch(1, a, b, t); }
  void blt(uint32_t a, uint32_t b, Label t) { branch(4, a, b, t); }
  void bge(uint32_t a, uint32_t b, Label t) { branch(5, a, b, t); }
  void bltu(uint32_t a, uint32_t b, Label t) { branch(6, a, b, t); }
  void bgeu(uint32_t a, uint32_t b, Label t) { branch(7, a, b, t); }
  void jal(uint32_t rd, Label target);
  void c_j(Label target);
  void c_beqz(uint32_t rs1, Label target);
  void c_bnez(uint32_t rs1, Label target);
  /// auipc+addi of a label address.
  void la(uint32_t rd, Label target);

  /// Materializes any 64-bit constant.
  void li(uint32_t rd, int64_t value);
  /// Pads with nops (c.nop for a 2-byte remainder).
  void align(unsigned bytes);

  /// Stores 1 to kTohost and spins.
  void pass();
  /// Stores (code << 1) | 1 to kTohost and spins.
  void fail(uint32_t code);

  std::vector<uint8_t> finish() const;

 private:
  enum class Fix { Branch, Jal, CJ, CBranch, La };
  struct Fixup {
    Fix kind;
    size_t offset;
    Label target;
  };

  void put32(size_t off, uint32_t w);
  uint32_t get32(size_t off) const;

  uint64_t base_;
  std::vector<uint8_t> bytes_;
  std::vector<std::optional<uint64_t>> labels_;
  std::vector<Fixup> fixups_;
};

}  // namespace rvtest
