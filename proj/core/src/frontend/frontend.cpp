#include "rvsim/frontend/frontend.hpp"

#include <algorithm>
#include <stdexcept>

namespace rvsim {

Frontend::Frontend(const FrontendConfig& cfg, MemorySystem& mem, const IsaConfig& isa)
    : cfg_(cfg), mem_(mem), isa_(isa), bp_(cfg.predictor) {
  if (cfg_.fq_depth < 2) throw std::invalid_argument("fq_depth must be at least 2");
}

void Frontend::reset(uint64_t pc, uint64_t now) {
  fq_.clear();
  fetch_pc_ = pc;
  next_fetch_ = now;
  halted_ = false;
  realign_ = false;
}

void Frontend::redirect(uint64_t now, uint64_t target, RedirectReason reason, const Ras* ras) {
  fq_.clear();
  fetch_pc_ = target;
  next_fetch_ = now + cfg_.redirect_delay;
  halted_ = false;
  realign_ = false;
  if (ras) bp_.ras() = *ras;
  ++stats_.redirects[static_cast<size_t>(reason)];
}

void Frontend::resolve(uint64_t pc, const DecodedInst& inst, bool taken, uint64_t target) {
  bp_.resolve(pc, inst, taken, target);
  ++resolve_seq_;
}

void Frontend::push_fault(const Trap& trap, uint64_t ready) {
  FetchEntry e;
  e.pc = trap.pc;
  e.fault = trap;
  e.ready = ready;
  e.ras_after = bp_.ras();
  fq_.push_back(e);
  halted_ = true;
  realign_ = false;
}

void Frontend::push(uint64_t pc, uint64_t paddr, uint32_t bits, uint64_t ready, bool& taken) {
  FetchEntry e;
  e.pc = pc;
  e.paddr = paddr;
  e.inst = decode_parcel(bits, isa_);
  e.ready = ready;
  e.resolve_seq = resolve_seq_;
  e.pred = bp_.predict(pc, e.inst);
  e.ras_after = bp_.ras();
  if (e.pred.source == PredSource::Btb) ++stats_.btb_hits;
  if (e.pred.source == PredSource::Ras) ++stats_.ras_hits;
  if (e.pred.taken) {
    ++stats_.predicted_taken;
    taken = true;
    fetch_pc_ = e.pred.target;
  }
  fq_.push_back(e);
}

void Frontend::tick(uint64_t now, const ArchState& arch) {
  if (halted_ || now < next_fetch_) return;
  if (fq_.size() + 2 > cfg_.fq_depth) {
    ++stats_.stall_fq_full;
    return;
  }
  const uint64_t word_vaddr = (realign_ ? pending_pc_ + 2 : fetch_pc_) & ~uint64_t{3};
  // Trap attribution: a wrapped instruction faults at its own pc with the
  // second half's address as tval.
  const uint64_t inst_pc = realign_ ? pending_pc_ : fetch_pc_;
  const uint64_t probe = realign_ ? word_vaddr : fetch_pc_;

  Translation t = mem_.translate(now, probe, AccessType::Fetch, arch.priv, arch.csr, inst_pc);
  if (t.tlb_miss) ++stats_.itlb_misses;
  if (t.trap) {
    push_fault(*t.trap, t.ready + 1);
    next_fetch_ = t.ready;
    return;
  }
  const uint64_t paddr = t.paddr & ~uint64_t{3};
  SparseMemory& phys = mem_.memory();
  if (!phys.accessible(paddr, 4)) {
    push_fault(Trap::exception(cause::kInstrAccessFault, inst_pc, probe), t.ready + 1);
    next_fetch_ = t.ready;
    return;
  }
  const CacheTiming c = mem_.ifetch(t.ready, word_vaddr, paddr);
  ++stats_.fetch_words;
  if (!c.hit && !c.uncached) ++stats_.icache_misses;
  const uint64_t ready = c.ready + 1;  // output register
  const auto raw = static_cast<uint32_t>(phys.read(paddr, 4));

  bool taken = false;
  uint64_t addr = fetch_pc_;
  if (realign_) {
    push(pending_pc_, pending_paddr_, pending_lo_ | ((raw & 0xffffu) << 16), ready, taken);
    realign_ = false;
    addr = word_vaddr + 2;
  }
  while (!taken && addr < word_vaddr + 4) {
    const unsigned off = static_cast<unsigned>(addr - word_vaddr);
    const auto half = static_cast<uint16_t>(raw >> (8 * off));
    if (is_compressed_parcel(half)) {
      push(addr, paddr + off, half, ready, taken);
      addr += 2;
    } else if (off == 0) {
      push(addr, paddr, raw, ready, taken);
      addr += 4;
    } else {
      realign_ = true;
      pending_lo_ = half;
      pending_pc_ = addr;
      pending_paddr_ = paddr + off;
      addr += 2;
    }
  }
  if (!taken) fetch_pc_ = word_vaddr + 4;
  next_fetch_ = std::max(c.ready, now + 1) + (taken ? 1 : 0);
}

}  // namespace rvsim
