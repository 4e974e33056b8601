#include "rvsim/mmu/tlb.hpp"

namespace rvsim {

namespace {
uint64_t vpn_of(uint64_t vaddr) { return (vaddr >> 12) & ((uint64_t{1} << 27) - 1); }
}  // namespace

bool TlbEntry::matches(uint64_t vaddr) const {
  if (!valid) return false;
  const unsigned shift = 9 * level;
  return (vpn_of(vaddr) >> shift) == (vpn >> shift);
}

uint64_t TlbEntry::translate(uint64_t vaddr) const {
  const unsigned offset_bits = 12 + 9 * level;
  const uint64_t mask = (uint64_t{1} << offset_bits) - 1;
  return ((ppn << 12) & ~mask) | (vaddr & mask);
}

Tlb::Tlb(unsigned entries) : entries_(entries), plru_(entries) {}

std::optional<unsigned> Tlb::probe(uint64_t vaddr) const {
  for (unsigned i = 0; i < entries_.size(); ++i) {
    if (entries_[i].matches(vaddr)) return i;
  }
  return std::nullopt;
}

std::optional<unsigned> Tlb::lookup(uint64_t vaddr) {
  auto hit = probe(vaddr);
  if (hit) plru_.touch(*hit);
  return hit;
}

unsigned Tlb::next_victim() const {
  for (unsigned i = 0; i < entries_.size(); ++i) {
    if (!entries_[i].valid) return i;
  }
  return plru_.victim();
}

unsigned Tlb::fill(const TlbEntry& e) {
  const unsigned slot = next_victim();
  entries_[slot] = e;
  entries_[slot].valid = true;
  plru_.touch(slot);
  return slot;
}

void Tlb::flush() {
  for (auto& e : entries_) e.valid = false;
}

unsigned Tlb::valid_count() const {
  unsigned n = 0;
  for (const auto& e : entries_) n += e.valid ? 1 : 0;
  return n;
}

bool leaf_permits(uint64_t perms, AccessType access, Priv priv, bool sum, bool mxr) {
  const bool u = perms & pte::kU;
  if (priv == Priv::U && !u) return false;
  if (priv == Priv::S && u && (access == AccessType::Fetch || !sum)) return false;
  switch (access) {
    case AccessType::Fetch:
      if (!(perms & pte::kX)) return false;
      break;
    case AccessType::Load:
      if (!((perms & pte::kR) || (mxr && (perms & pte::kX)))) return false;
      break;
    case AccessType::Store:
      if (!(perms & pte::kW)) return false;
      break;
  }
  if (!(perms & pte::kA)) return false;
  if (access == AccessType::Store && !(perms & pte::kD)) return false;
  return true;
}

}  // namespace rvsim
