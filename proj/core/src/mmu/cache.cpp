#include "rvsim/mmu/cache.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace rvsim {

void CacheConfig::validate(std::string_view name) const {
  const std::string n(name);
  if (ways == 0 || line_bytes == 0 || size_bytes == 0) {
    throw std::invalid_argument(n + ": size, ways and line size must be non-zero");
  }
  if (!std::has_single_bit(ways) || !std::has_single_bit(line_bytes) ||
      !std::has_single_bit(size_bytes)) {
    throw std::invalid_argument(n + ": size, ways and line size must be powers of two");
  }
  if (line_bytes < 8 || size_bytes < uint64_t{ways} * line_bytes) {
    throw std::invalid_argument(n + ": cache smaller than one set");
  }
  if (size_bytes / ways > 4096) {
    throw std::invalid_argument(n + ": set index must lie within the 4 KiB page offset");
  }
}

CacheModel::CacheModel(const CacheConfig& cfg)
    : cfg_(cfg),
      offset_bits_(static_cast<unsigned>(std::countr_zero(cfg.line_bytes))),
      sets_(cfg.sets()),
      rng_(cfg.seed) {
  cfg_.validate("cache");
  lines_.resize(size_t{sets_} * cfg_.ways);
  plru_.assign(sets_, TreePlru(cfg_.ways));
  set_misses_.assign(sets_, 0);
}

unsigned CacheModel::set_index(uint64_t vaddr) const {
  return static_cast<unsigned>((vaddr >> offset_bits_) & (sets_ - 1));
}

bool CacheModel::probe(uint64_t vaddr, uint64_t paddr) const {
  const unsigned set = set_index(vaddr);
  const uint64_t tag = paddr >> offset_bits_;
  for (unsigned w = 0; w < cfg_.ways; ++w) {
    const Line& l = line(set, w);
    if (l.valid && l.tag == tag) return true;
  }
  return false;
}

unsigned CacheModel::choose_victim(unsigned set) {
  for (unsigned w = 0; w < cfg_.ways; ++w) {
    if (!line(set, w).valid) return w;
  }
  if (cfg_.policy == ReplacementPolicy::Random) {
    return static_cast<unsigned>(rng_() % cfg_.ways);
  }
  return plru_[set].victim();
}

CacheResult CacheModel::access(uint64_t vaddr, uint64_t paddr, CacheOp op) {
  CacheResult r;
  const unsigned set = set_index(vaddr);
  const uint64_t tag = paddr >> offset_bits_;
  for (unsigned w = 0; w < cfg_.ways; ++w) {
    Line& l = line(set, w);
    if (l.valid && l.tag == tag) {
      r.hit = true;
      r.way = w;
      if (op == CacheOp::Write) l.dirty = true;
      plru_[set].touch(w);
      ++hits_;
      return r;
    }
  }
  ++misses_;
  ++set_misses_[set];
  const unsigned w = choose_victim(set);
  Line& l = line(set, w);
  if (l.valid && l.dirty) r.evicted_dirty = l.tag;
  l.tag = tag;
  l.valid = true;
  l.dirty = op == CacheOp::Write;
  plru_[set].touch(w);
  r.way = w;
  return r;
}

void CacheModel::invalidate_all() {
  for (auto& l : lines_) l = Line{};
  for (auto& p : plru_) p.reset();
}

std::vector<uint64_t> CacheModel::write_back_all() {
  std::vector<uint64_t> out;
  for (auto& l : lines_) {
    if (l.valid && l.dirty) {
      out.push_back(l.tag);
      l.dirty = false;
    }
  }
  return out;
}

std::vector<uint64_t> CacheModel::dirty_lines() const {
  std::vector<uint64_t> out;
  for (const auto& l : lines_) {
    if (l.valid && l.dirty) out.push_back(l.tag);
  }
  return out;
}

}  // namespace rvsim
