#include "rvsim/frontend/predictor.hpp"

#include <bit>
#include <stdexcept>

namespace rvsim {

void PredictorConfig::validate() const {
  if (!std::has_single_bit(bht_entries)) throw std::invalid_argument("bht_entries must be a power of two");
  if (!std::has_single_bit(btb_entries)) throw std::invalid_argument("btb_entries must be a power of two");
  if (ras_depth == 0 || ras_depth > Ras::kMaxDepth) {
    throw std::invalid_argument("ras_depth must be between 1 and 16");
  }
  if (bht_init > 3) throw std::invalid_argument("bht_init must be 0..3");
}

Bht::Bht(unsigned entries, uint8_t init) : entries_(entries, Entry{init, false}), init_(init) {}

uint8_t Bht::next_counter(uint8_t counter, bool taken) {
  if (taken) return counter < 3 ? counter + 1 : 3;
  return counter > 0 ? counter - 1 : 0;
}

void Bht::update(uint64_t pc, bool taken) {
  Entry& e = entries_[index(pc)];
  if (!e.valid) {
    e.counter = init_;
    e.valid = true;
  }
  e.counter = next_counter(e.counter, taken);
}

Btb::Btb(unsigned entries)
    : entries_(entries), index_bits_(static_cast<unsigned>(std::countr_zero(entries))) {}

bool Btb::lookup(uint64_t pc, uint64_t& target) const {
  const Entry& e = entries_[index(pc)];
  if (!e.valid || e.tag != tag(pc)) return false;
  target = e.target;
  return true;
}

void Btb::update(uint64_t pc, uint64_t target) {
  entries_[index(pc)] = Entry{tag(pc), target, true};
}

Ras::Ras(unsigned depth) : depth_(static_cast<uint8_t>(depth)) {}

void Ras::push(uint64_t addr) {
  if (count_ == depth_) {
    for (unsigned i = 1; i < depth_; ++i) stack_[i - 1] = stack_[i];
    --count_;
  }
  stack_[count_++] = addr;
}

bool Ras::pop(uint64_t& addr) {
  if (count_ == 0) return false;
  addr = stack_[--count_];
  return true;
}

std::string_view pred_source_name(PredSource s) {
  switch (s) {
    case PredSource::Bht: return "bht";
    case PredSource::Btb: return "btb";
    case PredSource::Ras: return "ras";
    case PredSource::Static: return "static";
    case PredSource::Direct: return "direct";
    case PredSource::Fallthrough: return "fallthrough";
  }
  return "?";
}

BranchPredictor::BranchPredictor(const PredictorConfig& cfg)
    : cfg_((cfg.validate(), cfg)),
      bht_(cfg.bht_entries, cfg.bht_init),
      btb_(cfg.btb_entries),
      ras_(cfg.ras_depth) {}

Prediction BranchPredictor::predict(uint64_t pc, const DecodedInst& inst) {
  Prediction p;
  const uint64_t link = pc + inst.length();
  switch (inst.klass) {
    case InstClass::BRANCH: {
      if (cfg_.mode == PredictorMode::NeverTaken) return p;
      const uint64_t target = pc + static_cast<uint64_t>(inst.imm);
      if (bht_.valid(pc)) {
        p.source = PredSource::Bht;
        p.taken = bht_.counter(pc) >= 2;
      } else {
        p.source = PredSource::Static;
        p.taken = inst.imm < 0;
      }
      if (p.taken) p.target = target;
      return p;
    }
    case InstClass::JAL:
      if (inst.is_call()) ras_.push(link);
      if (cfg_.mode == PredictorMode::NeverTaken) return p;
      p.taken = true;
      p.target = pc + static_cast<uint64_t>(inst.imm);
      p.source = PredSource::Direct;
      return p;
    case InstClass::JALR: {
      uint64_t target = 0;
      if (inst.is_return()) {
        if (ras_.pop(target) && cfg_.mode == PredictorMode::Default) {
          p = Prediction{true, target, PredSource::Ras};
        }
      } else if (cfg_.mode == PredictorMode::Default && btb_.lookup(pc, target)) {
        p = Prediction{true, target, PredSource::Btb};
      }
      if (inst.is_call()) ras_.push(link);
      return p;
    }
    default:
      return p;
  }
}

void BranchPredictor::resolve(uint64_t pc, const DecodedInst& inst, bool taken, uint64_t target) {
  if (inst.klass == InstClass::BRANCH) {
    bht_.update(pc, taken);
  } else if (inst.klass == InstClass::JALR && !inst.is_return()) {
    btb_.update(pc, target);
  }
}

}  // namespace rvsim
