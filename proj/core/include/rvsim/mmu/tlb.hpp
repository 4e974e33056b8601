#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rvsim/isa/types.hpp"
#include "rvsim/mmu/plru.hpp"

namespace rvsim {

namespace pte {
inline constexpr uint64_t kV = 1 << 0;
inline constexpr uint64_t kR = 1 << 1;
inline constexpr uint64_t kW = 1 << 2;
inline constexpr uint64_t kX = 1 << 3;
inline constexpr uint64_t kU = 1 << 4;
inline constexpr uint64_t kG = 1 << 5;
inline constexpr uint64_t kA = 1 << 6;
inline constexpr uint64_t kD = 1 << 7;
inline constexpr unsigned kPpnShift = 10;
inline constexpr uint64_t kPpnMask = (uint64_t{1} << 44) - 1;

inline uint64_t ppn(uint64_t entry) { return (entry >> kPpnShift) & kPpnMask; }
}  // namespace pte

/// One cached translation. `level` gives the page size: 0 = 4 KiB,
/// 1 = 2 MiB, 2 = 1 GiB.
struct TlbEntry {
  uint64_t vpn = 0;  // full 27-bit VPN; low 9*level bits ignored on match
  uint64_t ppn = 0;
  uint8_t perms = 0;  // PTE bits [7:0]
  uint8_t level = 0;
  bool valid = false;

  bool matches(uint64_t vaddr) const;
  uint64_t translate(uint64_t vaddr) const;
};

/// Fully associative TLB with tree-PLRU replacement.
class Tlb {
 public:
  explicit Tlb(unsigned entries = 16);

  /// Hit returns the slot index and marks it most recently used.
  std::optional<unsigned> lookup(uint64_t vaddr);
  /// Lookup without touching replacement state.
  std::optional<unsigned> probe(uint64_t vaddr) const;
  /// Inserts into the first invalid slot, else the PLRU victim. Returns the slot.
  unsigned fill(const TlbEntry& e);
  unsigned next_victim() const;
  void flush();

  const TlbEntry& entry(unsigned slot) const { return entries_[slot]; }
  unsigned size() const { return static_cast<unsigned>(entries_.size()); }
  unsigned valid_count() const;
  const TreePlru& plru() const { return plru_; }

 private:
  std::vector<TlbEntry> entries_;
  TreePlru plru_;
};

/// Permission and A/D check of a leaf against an access. Hardware never
/// sets A or D: A=0, or D=0 on a store, faults.
bool leaf_permits(uint64_t perms, AccessType access, Priv priv, bool sum, bool mxr);

}  // namespace rvsim
