#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "rvsim/isa/decode.hpp"

namespace rvsim {

/// Index of the highest set bit, -1 for zero.
int msb_index(uint64_t v);

/// Serial divider occupancy: clamp(2, 64, msb|a| - msb|b| + 1 + 2), with a
/// zero divisor or dividend finishing after 2 cycles. Word forms look at
/// the low 32 bits.
unsigned div_latency(uint64_t dividend, uint64_t divisor, bool is_signed, bool word = false);
unsigned div_latency(Op op, uint64_t dividend, uint64_t divisor);

/// Restoring shift-subtract division that reports its iteration count;
/// the reference the latency model is checked against.
struct SerialDivResult {
  uint64_t quotient = 0;
  uint64_t remainder = 0;
  unsigned iterations = 0;
};
SerialDivResult serial_divide(uint64_t dividend, uint64_t divisor);

struct StoreBufferEntry {
  uint64_t rob_id = 0;
  uint64_t vaddr = 0;
  uint64_t paddr = 0;
  uint64_t data = 0;
  uint8_t width = 0;
  bool committed = false;
};

/// Stores wait here from execute until commit confirms them, then drain to
/// the D$ in order.
class StoreBuffer {
 public:
  explicit StoreBuffer(unsigned depth = 8) : depth_(depth) {}

  bool full() const { return entries_.size() >= depth_; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  unsigned depth() const { return depth_; }

  void push(const StoreBufferEntry& e) { entries_.push_back(e); }
  void commit(uint64_t rob_id);
  /// Removes every speculative entry; returns how many were dropped.
  size_t drop_speculative();
  /// Removes speculative entries belonging to ROB ids >= `first_id`.
  size_t drop_from(uint64_t first_id);
  bool overlaps(uint64_t paddr, unsigned width) const;

  bool head_committed() const { return !entries_.empty() && entries_.front().committed; }
  const StoreBufferEntry& front() const { return entries_.front(); }
  void pop() { entries_.pop_front(); }
  const std::deque<StoreBufferEntry>& entries() const { return entries_; }

 private:
  unsigned depth_;
  std::deque<StoreBufferEntry> entries_;
};

}  // namespace rvsim
