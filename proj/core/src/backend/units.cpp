#include "rvsim/backend/units.hpp"

#include <algorithm>
#include <bit>

namespace rvsim {

int msb_index(uint64_t v) { return v == 0 ? -1 : 63 - std::countl_zero(v); }

namespace {
uint64_t magnitude(uint64_t v, bool is_signed, bool word) {
  if (word) {
    const auto w = static_cast<uint32_t>(v);
    if (is_signed && static_cast<int32_t>(w) < 0) return (uint64_t{0} - w) & 0xffffffffu;
    return w;
  }
  if (is_signed && static_cast<int64_t>(v) < 0) return uint64_t{0} - v;
  return v;
}
}  // namespace

unsigned div_latency(uint64_t dividend, uint64_t divisor, bool is_signed, bool word) {
  const uint64_t a = magnitude(dividend, is_signed, word);
  const uint64_t b = magnitude(divisor, is_signed, word);
  if (a == 0 || b == 0) return 2;
  const int n = msb_index(a) - msb_index(b) + 1 + 2;
  return static_cast<unsigned>(std::clamp(n, 2, 64));
}

unsigned div_latency(Op op, uint64_t dividend, uint64_t divisor) {
  switch (op) {
    case Op::DIV: case Op::REM: return div_latency(dividend, divisor, true, false);
    case Op::DIVU: case Op::REMU: return div_latency(dividend, divisor, false, false);
    case Op::DIVW: case Op::REMW: return div_latency(dividend, divisor, true, true);
    case Op::DIVUW: case Op::REMUW: return div_latency(dividend, divisor, false, true);
    default: return 2;
  }
}

SerialDivResult serial_divide(uint64_t dividend, uint64_t divisor) {
  SerialDivResult r;
  if (divisor == 0) {
    r.quotient = ~uint64_t{0};
    r.remainder = dividend;
    return r;
  }
  // Align the divisor under the dividend's leading one, then one
  // compare-subtract per quotient bit.
  const int shift = msb_index(dividend) - msb_index(divisor);
  if (shift < 0) {
    r.remainder = dividend;
    return r;
  }
  uint64_t rem = dividend;
  uint64_t q = 0;
  for (int i = shift; i >= 0; --i) {
    const unsigned __int128 d = static_cast<unsigned __int128>(divisor) << i;
    q <<= 1;
    if (rem >= d) {
      rem -= static_cast<uint64_t>(d);
      q |= 1;
    }
    ++r.iterations;
  }
  r.quotient = q;
  r.remainder = rem;
  return r;
}

void StoreBuffer::commit(uint64_t rob_id) {
  for (auto& e : entries_) {
    if (e.rob_id == rob_id) {
      e.committed = true;
      return;
    }
  }
}

size_t StoreBuffer::drop_speculative() {
  const size_t before = entries_.size();
  std::erase_if(entries_, [](const StoreBufferEntry& e) { return !e.committed; });
  return before - entries_.size();
}

size_t StoreBuffer::drop_from(uint64_t first_id) {
  const size_t before = entries_.size();
  std::erase_if(entries_,
                [&](const StoreBufferEntry& e) { return !e.committed && e.rob_id >= first_id; });
  return before - entries_.size();
}

bool StoreBuffer::overlaps(uint64_t paddr, unsigned width) const {
  for (const auto& e : entries_) {
    if (paddr < e.paddr + e.width && e.paddr < paddr + width) return true;
  }
  return false;
}

}  // namespace rvsim
