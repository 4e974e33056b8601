#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "rvsim/isa/memory.hpp"

namespace rvsim {

/// Byte-addressed physical memory allocated on demand in 4 KiB pages.
/// Unwritten bytes read as zero.
class SparseMemory : public Memory {
 public:
  struct Region {
    uint64_t base = 0;
    uint64_t size = 0;
  };

  SparseMemory() = default;
  SparseMemory(const SparseMemory& other);
  SparseMemory& operator=(const SparseMemory& other);
  SparseMemory(SparseMemory&&) noexcept = default;
  SparseMemory& operator=(SparseMemory&&) noexcept = default;

  uint64_t read(uint64_t paddr, unsigned size) const override;
  void write(uint64_t paddr, unsigned size, uint64_t value) override;
  bool accessible(uint64_t paddr, unsigned size) const override;

  void write_bytes(uint64_t paddr, std::span<const uint8_t> bytes);
  std::vector<uint8_t> read_bytes(uint64_t paddr, size_t len) const;

  /// With no regions every address is accessible; otherwise accesses
  /// outside all regions raise access faults.
  void add_region(uint64_t base, uint64_t size) { regions_.push_back({base, size}); }
  const std::vector<Region>& regions() const { return regions_; }

  size_t pages_allocated() const { return pages_.size(); }
  /// Same bytes at every allocated address of either memory.
  bool same_contents(const SparseMemory& other) const;

 private:
  static constexpr uint64_t kPageBits = 12;
  static constexpr uint64_t kPageSize = uint64_t{1} << kPageBits;
  using Page = std::array<uint8_t, kPageSize>;

  const Page* find(uint64_t page) const;
  Page& touch(uint64_t page);

  std::unordered_map<uint64_t, std::unique_ptr<Page>> pages_;
  std::vector<Region> regions_;
};

}  // namespace rvsim
