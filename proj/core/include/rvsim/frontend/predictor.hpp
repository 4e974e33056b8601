#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "rvsim/isa/decode.hpp"

namespace rvsim {

enum class PredictorMode : uint8_t { Default, NeverTaken };

struct PredictorConfig {
  unsigned bht_entries = 8;
  unsigned btb_entries = 8;
  unsigned ras_depth = 4;
  uint8_t bht_init = 1;
  PredictorMode mode = PredictorMode::Default;

  void validate() const;
};

/// Two-bit saturating counters with a valid bit, indexed by PC[log2(n):1].
class Bht {
 public:
  Bht(unsigned entries, uint8_t init);

  unsigned index(uint64_t pc) const { return static_cast<unsigned>((pc >> 1) & (entries_.size() - 1)); }
  bool valid(uint64_t pc) const { return entries_[index(pc)].valid; }
  uint8_t counter(uint64_t pc) const { return entries_[index(pc)].counter; }
  void update(uint64_t pc, bool taken);
  unsigned size() const { return static_cast<unsigned>(entries_.size()); }

  static uint8_t next_counter(uint8_t counter, bool taken);

 private:
  struct Entry {
    uint8_t counter;
    bool valid;
  };
  std::vector<Entry> entries_;
  uint8_t init_;
};

/// Direct-mapped, tagged branch target buffer.
class Btb {
 public:
  explicit Btb(unsigned entries);

  bool lookup(uint64_t pc, uint64_t& target) const;
  void update(uint64_t pc, uint64_t target);
  unsigned size() const { return static_cast<unsigned>(entries_.size()); }

 private:
  struct Entry {
    uint64_t tag = 0;
    uint64_t target = 0;
    bool valid = false;
  };
  unsigned index(uint64_t pc) const { return static_cast<unsigned>((pc >> 1) & (entries_.size() - 1)); }
  uint64_t tag(uint64_t pc) const { return pc >> (index_bits_ + 1); }

  std::vector<Entry> entries_;
  unsigned index_bits_;
};

/// Return-address stack. A push onto a full stack drops the oldest entry.
class Ras {
 public:
  static constexpr unsigned kMaxDepth = 16;

  explicit Ras(unsigned depth = 4);

  void push(uint64_t addr);
  bool pop(uint64_t& addr);
  bool empty() const { return count_ == 0; }
  unsigned count() const { return count_; }
  unsigned depth() const { return depth_; }

  friend bool operator==(const Ras&, const Ras&) = default;

 private:
  std::array<uint64_t, kMaxDepth> stack_{};
  uint8_t depth_;
  uint8_t count_ = 0;
};

enum class PredSource : uint8_t { Bht, Btb, Ras, Static, Direct, Fallthrough };
std::string_view pred_source_name(PredSource s);

struct Prediction {
  bool taken = false;
  uint64_t target = 0;
  PredSource source = PredSource::Fallthrough;
};

/// BHT + BTB + RAS with the static backward-taken fallback. Prediction
/// updates only the RAS; counters and targets change at resolution.
class BranchPredictor {
 public:
  explicit BranchPredictor(const PredictorConfig& cfg);

  Prediction predict(uint64_t pc, const DecodedInst& inst);
  void resolve(uint64_t pc, const DecodedInst& inst, bool taken, uint64_t target);

  Bht& bht() { return bht_; }
  Btb& btb() { return btb_; }
  Ras& ras() { return ras_; }
  const Ras& ras() const { return ras_; }
  const PredictorConfig& config() const { return cfg_; }

 private:
  PredictorConfig cfg_;
  Bht bht_;
  Btb btb_;
  Ras ras_;
};

}  // namespace rvsim
