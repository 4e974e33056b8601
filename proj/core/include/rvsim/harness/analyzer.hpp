#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "rvsim/harness/loader.hpp"

namespace rvsim {

struct BinaryStats {
  uint64_t compressed = 0;
  uint64_t full = 0;
  uint64_t invalid = 0;  // zero parcels and other padding skipped by the sweep
  uint64_t branches = 0;
  uint64_t calls = 0;

  uint64_t total() const { return compressed + full; }
  /// Code size relative to an all-32-bit encoding of the same instructions.
  double compression_ratio() const;
  double branch_fraction() const;
  double call_fraction() const;
  void merge(const BinaryStats& o);
};

/// Linear sweep over raw code bytes. Instruction length follows the low
/// two bits of each parcel, so encodings outside RV64IMAC (for example
/// floating point) still count toward the totals.
BinaryStats analyze_code(std::span<const uint8_t> code);
/// Sweeps every executable section.
BinaryStats analyze_binary(const ElfImage& elf);
BinaryStats analyze_binary(const std::string& path);

}  // namespace rvsim
