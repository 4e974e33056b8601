#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rvsim/mmu/sparse_memory.hpp"

namespace rvsim {

struct ElfSegment {
  uint64_t vaddr = 0;
  uint64_t paddr = 0;
  uint64_t filesz = 0;
  uint64_t memsz = 0;
  uint64_t offset = 0;
};

struct ElfSection {
  std::string name;
  uint64_t addr = 0;
  uint64_t offset = 0;
  uint64_t size = 0;
  bool executable = false;
};

/// The parts of an RV64 ELF executable the harness uses.
struct ElfImage {
  uint64_t entry = 0;
  std::vector<ElfSegment> segments;  // PT_LOAD only
  std::vector<ElfSection> sections;
  std::optional<uint64_t> tohost;
  std::optional<uint64_t> fromhost;
  std::vector<uint8_t> bytes;

  std::span<const uint8_t> section_bytes(const ElfSection& s) const;
};

/// Throws std::runtime_error on malformed input, a non-ELF64 or big-endian
/// file, a machine other than RISC-V, or overlapping PT_LOAD segments.
ElfImage parse_elf(std::vector<uint8_t> bytes);
ElfImage read_elf(const std::string& path);

struct LoadedProgram {
  uint64_t entry = 0;
  std::optional<uint64_t> tohost;
  std::optional<uint64_t> fromhost;
};

/// Copies the PT_LOAD segments (zero-filling bss) at their physical addresses.
LoadedProgram load_elf(const ElfImage& elf, SparseMemory& mem);
LoadedProgram load_elf(const std::string& path, SparseMemory& mem);
/// Raw image at `base`; execution starts at `entry`.
LoadedProgram load_flat(const std::string& path, uint64_t base, uint64_t entry,
                        SparseMemory& mem);

std::vector<uint8_t> read_file(const std::string& path);

}  // namespace rvsim
