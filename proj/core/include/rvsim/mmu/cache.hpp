#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "rvsim/mmu/plru.hpp"

namespace rvsim {

enum class ReplacementPolicy : uint8_t { Plru, Random };

struct CacheConfig {
  uint64_t size_bytes = 32 * 1024;
  unsigned ways = 8;
  unsigned line_bytes = 64;
  unsigned latency = 3;
  ReplacementPolicy policy = ReplacementPolicy::Plru;
  uint64_t seed = 1;

  unsigned sets() const { return static_cast<unsigned>(size_bytes / (uint64_t{ways} * line_bytes)); }
  /// Throws std::invalid_argument for non-power-of-two geometry or an index
  /// that reaches beyond the 4 KiB page offset.
  void validate(std::string_view name) const;
};

enum class CacheOp : uint8_t { Read, Write, FillOnly };

struct CacheResult {
  bool hit = false;
  unsigned way = 0;
  /// Line address (paddr / line_bytes) of a dirty line evicted by this fill.
  std::optional<uint64_t> evicted_dirty;
};

/// Tag and replacement state of a virtually indexed, physically tagged,
/// write-back, write-allocate cache. Data is not stored here.
class CacheModel {
 public:
  explicit CacheModel(const CacheConfig& cfg);

  CacheResult access(uint64_t vaddr, uint64_t paddr, CacheOp op);
  bool probe(uint64_t vaddr, uint64_t paddr) const;

  /// Drops every line (dirty contents are assumed already written back).
  void invalidate_all();
  /// Cleans every dirty line and returns their line addresses.
  std::vector<uint64_t> write_back_all();
  std::vector<uint64_t> dirty_lines() const;

  unsigned set_index(uint64_t vaddr) const;
  const CacheConfig& config() const { return cfg_; }
  uint64_t hits() const { return hits_; }
  uint64_t misses() const { return misses_; }
  const std::vector<uint64_t>& set_misses() const { return set_misses_; }

 private:
  struct Line {
    uint64_t tag = 0;  // paddr / line_bytes
    bool valid = false;
    bool dirty = false;
  };

  Line& line(unsigned set, unsigned way) { return lines_[set * cfg_.ways + way]; }
  const Line& line(unsigned set, unsigned way) const { return lines_[set * cfg_.ways + way]; }
  unsigned choose_victim(unsigned set);

  CacheConfig cfg_;
  unsigned offset_bits_;
  unsigned sets_;
  std::vector<Line> lines_;
  std::vector<TreePlru> plru_;
  std::mt19937_64 rng_;
  uint64_t hits_ = 0;
  uint64_t misses_ = 0;
  std::vector<uint64_t> set_misses_;
};

}  // namespace rvsim
