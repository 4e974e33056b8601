#include "rvsim/mmu/sparse_memory.hpp"

#include <cstring>

namespace rvsim {

SparseMemory::SparseMemory(const SparseMemory& other) : regions_(other.regions_) {
  for (const auto& [page, data] : other.pages_) pages_.emplace(page, std::make_unique<Page>(*data));
}

SparseMemory& SparseMemory::operator=(const SparseMemory& other) {
  if (this != &other) {
    SparseMemory copy(other);
    *this = std::move(copy);
  }
  return *this;
}

bool SparseMemory::same_contents(const SparseMemory& other) const {
  static const Page kZero{};
  for (const auto& [page, data] : pages_) {
    const Page* o = other.find(page);
    if (*data != (o ? *o : kZero)) return false;
  }
  for (const auto& [page, data] : other.pages_) {
    if (!find(page) && *data != kZero) return false;
  }
  return true;
}

const SparseMemory::Page* SparseMemory::find(uint64_t page) const {
  auto it = pages_.find(page);
  return it == pages_.end() ? nullptr : it->second.get();
}

SparseMemory::Page& SparseMemory::touch(uint64_t page) {
  auto& slot = pages_[page];
  if (!slot) {
    slot = std::make_unique<Page>();
    slot->fill(0);
  }
  return *slot;
}

uint64_t SparseMemory::read(uint64_t paddr, unsigned size) const {
  const uint64_t off = paddr & (kPageSize - 1);
  if (off + size <= kPageSize) {
    const Page* p = find(paddr >> kPageBits);
    if (!p) return 0;
    uint64_t v = 0;
    std::memcpy(&v, p->data() + off, size);
    return v;
  }
  uint64_t v = 0;
  for (unsigned i = 0; i < size; ++i) v |= read(paddr + i, 1) << (8 * i);
  return v;
}

void SparseMemory::write(uint64_t paddr, unsigned size, uint64_t value) {
  const uint64_t off = paddr & (kPageSize - 1);
  if (off + size <= kPageSize) {
    std::memcpy(touch(paddr >> kPageBits).data() + off, &value, size);
    return;
  }
  for (unsigned i = 0; i < size; ++i) write(paddr + i, 1, (value >> (8 * i)) & 0xff);
}

bool SparseMemory::accessible(uint64_t paddr, unsigned size) const {
  if (regions_.empty()) return true;
  for (const auto& r : regions_) {
    if (paddr >= r.base && paddr - r.base + size <= r.size) return true;
  }
  return false;
}

void SparseMemory::write_bytes(uint64_t paddr, std::span<const uint8_t> bytes) {
  for (size_t i = 0; i < bytes.size(); ++i) write(paddr + i, 1, bytes[i]);
}

std::vector<uint8_t> SparseMemory::read_bytes(uint64_t paddr, size_t len) const {
  std::vector<uint8_t> out(len);
  for (size_t i = 0; i < len; ++i) out[i] = static_cast<uint8_t>(read(paddr + i, 1));
  return out;
}

}  // namespace rvsim
