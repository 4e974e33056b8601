#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>

#include "rvsim/frontend/predictor.hpp"
#include "rvsim/isa/arch_state.hpp"
#include "rvsim/isa/decode.hpp"
#include "rvsim/mmu/memory_system.hpp"

namespace rvsim {

struct FrontendConfig {
  PredictorConfig predictor;
  unsigned fq_depth = 4;
  /// Cycles from a redirect to the first fetch request at the new target
  /// (PC-generation register plus I$ request stage).
  unsigned redirect_delay = 2;
};

enum class RedirectReason : uint8_t { Mispredict, Exception, CsrFlush, Fence };

/// One instruction in the fetch queue, pre-decoded and carrying its
/// prediction, or a fetch fault.
struct FetchEntry {
  uint64_t pc = 0;
  uint64_t paddr = 0;
  DecodedInst inst;
  Prediction pred;
  std::optional<Trap> fault;
  uint64_t ready = 0;        // first cycle decode may take it
  uint64_t resolve_seq = 0;  // predictor resolutions seen when predicted
  Ras ras_after;             // RAS after this instruction's own push/pop
};

struct FrontendStats {
  uint64_t fetch_words = 0;
  uint64_t icache_misses = 0;
  uint64_t itlb_misses = 0;
  uint64_t predicted_taken = 0;
  uint64_t btb_hits = 0;
  uint64_t ras_hits = 0;
  uint64_t stall_fq_full = 0;
  std::array<uint64_t, 4> redirects{};  // by RedirectReason
};

/// PC generation, I$ access, realignment and the instruction queue.
class Frontend {
 public:
  Frontend(const FrontendConfig& cfg, MemorySystem& mem, const IsaConfig& isa);

  void reset(uint64_t pc, uint64_t now = 0);
  /// One fetch cycle; translation uses the privilege and CSRs in `arch`.
  void tick(uint64_t now, const ArchState& arch);

  bool has_ready(uint64_t now) const { return !fq_.empty() && fq_.front().ready <= now; }
  const FetchEntry& front() const { return fq_.front(); }
  void pop() { fq_.pop_front(); }
  size_t queue_size() const { return fq_.size(); }

  /// Drops everything in flight and restarts at `target`. `ras` restores
  /// the return stack (the state after the redirecting instruction).
  void redirect(uint64_t now, uint64_t target, RedirectReason reason, const Ras* ras = nullptr);

  /// Branch/jump outcome from the backend.
  void resolve(uint64_t pc, const DecodedInst& inst, bool taken, uint64_t target);
  uint64_t resolve_count() const { return resolve_seq_; }

  BranchPredictor& predictor() { return bp_; }
  const FrontendStats& stats() const { return stats_; }
  const FrontendConfig& config() const { return cfg_; }
  uint64_t fetch_pc() const { return fetch_pc_; }

 private:
  void push(uint64_t pc, uint64_t paddr, uint32_t bits, uint64_t ready, bool& taken);
  void push_fault(const Trap& trap, uint64_t ready);

  FrontendConfig cfg_;
  MemorySystem& mem_;
  IsaConfig isa_;
  BranchPredictor bp_;
  std::deque<FetchEntry> fq_;

  uint64_t fetch_pc_ = 0;
  uint64_t next_fetch_ = 0;
  bool halted_ = false;  // a fault was queued; wait for a redirect
  bool realign_ = false;
  uint16_t pending_lo_ = 0;
  uint64_t pending_pc_ = 0;
  uint64_t pending_paddr_ = 0;
  uint64_t resolve_seq_ = 0;
  FrontendStats stats_;
};

}  // namespace rvsim
