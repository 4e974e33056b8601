#include "rvsim/backend/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rvsim {

void BackendConfig::validate() const {
  if (rob_entries == 0 || rob_entries > 64) throw std::invalid_argument("rob_entries must be 1..64");
  if (store_buffer_depth == 0) throw std::invalid_argument("store_buffer_depth must be positive");
  if (issue_queue_depth == 0) throw std::invalid_argument("issue_queue_depth must be positive");
  if (alu_latency == 0 || mul_latency == 0) throw std::invalid_argument("FU latencies must be positive");
}

Core::Core(const CoreConfig& cfg, SparseMemory& mem)
    : cfg_((cfg.backend.validate(), cfg)),
      memsys_(cfg.mem, mem),
      frontend_(cfg.frontend, memsys_, cfg.isa),
      arch_(cfg.isa),
      sb_(cfg.backend.store_buffer_depth) {}

void Core::reset(uint64_t pc) {
  rob_.clear();
  iq_.clear();
  sb_ = StoreBuffer(cfg_.backend.store_buffer_depth);
  rename_bit_.fill(0);
  arch_.pc = pc;
  frontend_.reset(pc, cycle_);
}

CounterSnapshot Core::counters() const {
  CounterSnapshot c;
  c.cycle = cycle_;
  c.instret = stats_.retired;
  c.hpm = {memsys_.icache().misses(),
           memsys_.dcache().misses(),
           memsys_.stats().itlb_misses,
           memsys_.stats().dtlb_misses,
           stats_.loads,
           stats_.stores,
           stats_.exceptions + stats_.interrupts,
           stats_.branches,
           stats_.mispredicts,
           frontend_.stats().btb_hits};
  return c;
}

void Core::tick() {
  arch_.csr.irq_lines = lines_;
  load_issued_ = false;
  commit();
  execute();
  issue();
  drain_store_buffer();
  decode();
  frontend_.tick(cycle_, arch_);
  stats_.max_rob_occupancy = std::max<uint64_t>(stats_.max_rob_occupancy, rob_.size());
  ++cycle_;
}

// ---------------------------------------------------------------- commit

void Core::emit(RetireKind kind, const RobEntry& e, const std::optional<Trap>& trap, Priv priv,
                const CounterSnapshot& counters) {
  if (!hook_) return;
  RetireRecord r;
  r.kind = kind;
  r.cycle = cycle_;
  r.rob_id = e.id;
  r.pc = e.f.pc;
  r.pc_paddr = e.f.paddr;
  r.inst = e.f.inst;
  r.priv = priv;
  r.trap = trap;
  r.counters = counters;
  r.vm_active = e.vm_active;
  r.mispredicted = e.mispredicted;
  if (kind == RetireKind::Retired) {
    if (e.writes_rd) r.reg_write = RegWrite{e.f.inst.rd, e.result};
    r.load = e.load;
    r.store = e.store;
  }
  hook_(r);
}

void Core::commit() {
  const unsigned slots = cfg_.backend.dual_retire ? 2 : 1;
  const uint64_t before = stats_.retired;
  for (unsigned slot = 0; slot < slots; ++slot) {
    if (rob_.empty() || rob_.front().state != State::Done) break;
    if (!commit_one(rob_.front(), slot == 0)) break;
  }
  const uint64_t n = stats_.retired - before;
  if (n == 2) ++stats_.dual_retire_cycles;
  stats_.max_retire_per_cycle = std::max(stats_.max_retire_per_cycle, n);
}

bool Core::commit_one(RobEntry& e, bool first) {
  const DecodedInst& in = e.f.inst;
  const bool irq_pending = (arch_.csr.mip() & arch_.csr.mie) != 0;
  if (first) {
    // Interrupts attach to the retiring instruction; never to an AMO, and a
    // WFI retires first so the handler returns past it.
    const bool is_wfi = in.op == Op::WFI;
    if (irq_pending && in.klass != InstClass::AMO && !is_wfi) {
      if (auto irq = check_pending_interrupt(arch_, lines_)) {
        take_trap(e, *irq, RetireKind::Interrupt);
        return false;
      }
    }
  } else {
    if (e.commit_exec || e.trap || e.mispredicted || in.klass == InstClass::AMO) return false;
    if (irq_pending && check_pending_interrupt(arch_, lines_)) return false;
  }

  if (e.f.pc != arch_.pc) {
    throw std::logic_error("commit out of sequence at pc 0x" + std::to_string(e.f.pc));
  }

  if (e.trap) {
    take_trap(e, *e.trap, RetireKind::Exception);
    return false;
  }

  if (e.commit_exec) {
    const bool drain = in.klass == InstClass::FENCE || in.klass == InstClass::FENCE_I;
    if (drain && !sb_.empty()) return false;
    if (in.op == Op::WFI) {
      const bool legal = !(arch_.priv == Priv::U ||
                           (arch_.priv == Priv::S && (arch_.csr.mstatus & mstatus::kTW)));
      if (legal) {
        if (!wfi_waiting_) {
          wfi_waiting_ = true;
          wfi_since_ = cycle_;
        }
        if (!irq_pending && cycle_ - wfi_since_ < cfg_.backend.wfi_budget) {
          ++stats_.wfi_cycles;
          return false;
        }
      }
      wfi_waiting_ = false;
    }
    const CounterSnapshot snap = counters();
    arch_.csr.counters = snap;
    const Priv priv = arch_.priv;
    const RobEntry done = e;
    ExecOutcome out = exec_functional(arch_, in, memsys_.memory(), cfg_.isa);
    if (out.trap) {
      ++stats_.exceptions;
      flush_all(arch_.pc, RedirectReason::Exception, &done.f.ras_after);
      emit(RetireKind::Exception, done, out.trap, priv, snap);
      return false;
    }
    ++stats_.retired;
    RobEntry rec = done;
    rec.writes_rd = out.reg_write.has_value();
    rec.result = out.reg_write ? out.reg_write->value : 0;
    switch (in.klass) {
      case InstClass::FENCE:
        memsys_.fence_apply(FenceKind::Fence);
        rob_.pop_front();
        break;
      case InstClass::FENCE_I:
        memsys_.fence_apply(FenceKind::FenceI);
        flush_all(arch_.pc, RedirectReason::Fence, &done.f.ras_after);
        break;
      case InstClass::SFENCE_VMA:
        memsys_.fence_apply(FenceKind::SfenceVma);
        flush_all(arch_.pc, RedirectReason::Fence, &done.f.ras_after);
        break;
      default:
        if (in.op == Op::WFI) {
          rob_.pop_front();
        } else {
          flush_all(arch_.pc, RedirectReason::CsrFlush, &done.f.ras_after);
        }
        break;
    }
    emit(RetireKind::Retired, rec, std::nullopt, priv, snap);
    return false;
  }

  // Ordinary instruction.
  const CounterSnapshot snap = hook_ ? counters() : CounterSnapshot{};
  if (e.writes_rd) arch_.set_reg(in.rd, e.result);
  arch_.pc = e.next_pc;
  if (e.set_reservation) arch_.reservation = e.set_reservation;
  if (e.clear_reservation) arch_.reservation.reset();
  if (e.in_store_buffer) sb_.commit(e.id);
  if (e.load) ++stats_.loads;
  if (e.store || is_store_conditional(in.op)) ++stats_.stores;
  ++stats_.retired;
  const bool keep_going = !e.mispredicted;
  if (hook_) {
    const RobEntry done = e;
    rob_.pop_front();
    emit(RetireKind::Retired, done, std::nullopt, arch_.priv, snap);
  } else {
    rob_.pop_front();
  }
  return keep_going;
}

void Core::take_trap(const RobEntry& e, const Trap& trap, RetireKind kind) {
  const RobEntry copy = e;
  const Priv priv = arch_.priv;
  const CounterSnapshot snap = hook_ ? counters() : CounterSnapshot{};
  enter_trap(arch_, trap);
  if (kind == RetireKind::Interrupt) {
    ++stats_.interrupts;
  } else {
    ++stats_.exceptions;
  }
  flush_all(arch_.pc, RedirectReason::Exception, &copy.f.ras_after);
  emit(kind, copy, trap, priv, snap);
}

void Core::flush_all(uint64_t target, RedirectReason reason, const Ras* ras) {
  const Ras saved = ras ? *ras : frontend_.predictor().ras();
  rob_.clear();
  iq_.clear();
  rename_bit_.fill(0);
  stats_.sb_dropped += sb_.drop_speculative();
  div_busy_until_ = std::min(div_busy_until_, cycle_);
  wfi_waiting_ = false;
  last_mispredict_.reset();
  ++stats_.flushes;
  frontend_.redirect(cycle_, target, reason, &saved);
}

void Core::flush_younger(uint64_t id) {
  while (!rob_.empty() && rob_.back().id > id) {
    const RobEntry& y = rob_.back();
    if (y.writes_rd) rename_bit_[y.f.inst.rd] ^= 1;
    if (y.is_div) div_busy_until_ = std::min(div_busy_until_, cycle_);
    rob_.pop_back();
  }
  stats_.sb_dropped += sb_.drop_from(id + 1);
  iq_.clear();
  ++stats_.flushes;
}

// --------------------------------------------------------------- execute

void Core::execute() {
  for (size_t i = 0; i < rob_.size(); ++i) {
    RobEntry& e = rob_[i];
    if (e.state == State::Done || e.done_at > cycle_) continue;
    e.state = State::Done;
    if (!e.f.inst.is_control_flow() || e.trap) continue;
    ++stats_.branches;
    frontend_.resolve(e.f.pc, e.f.inst, e.taken, e.next_pc);
    if (e.mispredicted) {
      ++stats_.mispredicts;
      flush_younger(e.id);
      const Ras ras = e.f.ras_after;
      frontend_.redirect(cycle_, e.next_pc, RedirectReason::Mispredict, &ras);
      last_mispredict_ = cycle_;
      break;
    }
  }
}

// ----------------------------------------------------------------- issue

bool Core::read_operand(unsigned reg, uint64_t& value) const {
  if (reg == 0) {
    value = 0;
    return true;
  }
  for (auto it = rob_.rbegin(); it != rob_.rend(); ++it) {
    if (it->writes_rd && it->f.inst.rd == reg) {
      if (it->state != State::Done) return false;
      value = it->result;
      return true;
    }
  }
  value = arch_.reg(reg);
  return true;
}

namespace {
bool misaligned_target(uint64_t target, const IsaConfig& isa) {
  return isa.ext_c ? (target & 1) != 0 : (target & 3) != 0;
}
}  // namespace

void Core::issue() {
  if (iq_.empty() || iq_.front().ready > cycle_) return;
  if (rob_.size() >= cfg_.backend.rob_entries) {
    ++stats_.stall_rob_full;
    return;
  }
  if (!rob_.empty() && rob_.back().commit_exec) {
    ++stats_.stall_serialize;
    return;
  }
  const FetchEntry& f = iq_.front().f;
  const DecodedInst& in = f.inst;

  RobEntry e;
  e.id = next_id_;
  e.f = f;
  e.priv = arch_.priv;
  e.vm_active = arch_.translation_active(arch_.data_priv());
  e.next_pc = f.pc + in.length();
  e.done_at = cycle_ + 1;

  const auto finish = [&] {
    if (e.trap) e.writes_rd = false;
    if (e.writes_rd) {
      rename_bit_[in.rd] ^= 1;
      e.rd_ext = static_cast<uint8_t>((rename_bit_[in.rd] << 5) | in.rd);
    }
    if (last_mispredict_) {
      const uint64_t p = cycle_ - *last_mispredict_;
      stats_.penalty_min = stats_.penalty_samples ? std::min(stats_.penalty_min, p) : p;
      stats_.penalty_max = std::max(stats_.penalty_max, p);
      stats_.penalty_total += p;
      ++stats_.penalty_samples;
      last_mispredict_.reset();
    }
    rob_.push_back(std::move(e));
    ++next_id_;
    iq_.pop_front();
  };

  if (f.fault) {
    e.trap = f.fault;
    finish();
    return;
  }
  if (in.klass == InstClass::ILLEGAL) {
    e.trap = Trap::exception(cause::kIllegalInstr, f.pc, in.is_compressed ? in.parcel : in.raw);
    finish();
    return;
  }
  if (in.is_serializing()) {
    e.commit_exec = true;
    finish();
    return;
  }

  uint64_t a = 0;
  uint64_t b = 0;
  if ((in.reads_rs1() && !read_operand(in.rs1, a)) || (in.reads_rs2() && !read_operand(in.rs2, b))) {
    ++stats_.stall_operands;
    return;
  }
  e.writes_rd = in.writes_rd();
  if (e.writes_rd) {
    const auto ext = static_cast<uint8_t>(((rename_bit_[in.rd] ^ 1) << 5) | in.rd);
    for (const auto& o : rob_) {
      if (o.writes_rd && o.rd_ext == ext) {
        ++stats_.stall_rename;
        return;
      }
    }
  }

  const uint64_t imm = static_cast<uint64_t>(in.imm);
  switch (in.klass) {
    case InstClass::ALU:
      e.result = alu_compute(in.op, a, in.reads_rs2() ? b : imm, f.pc);
      e.done_at = cycle_ + cfg_.backend.alu_latency;
      break;
    case InstClass::MUL:
      e.result = muldiv_compute(in.op, a, b);
      e.done_at = cycle_ + cfg_.backend.mul_latency;
      break;
    case InstClass::DIV:
      if (cycle_ < div_busy_until_) {
        ++stats_.stall_fu_busy;
        return;
      }
      e.result = muldiv_compute(in.op, a, b);
      e.done_at = cycle_ + div_latency(in.op, a, b);
      e.is_div = true;
      div_busy_until_ = e.done_at;
      break;
    case InstClass::BRANCH:
    case InstClass::JAL:
    case InstClass::JALR: {
      uint64_t target = f.pc + imm;
      e.taken = true;
      if (in.klass == InstClass::BRANCH) e.taken = branch_taken(in.op, a, b);
      if (in.klass == InstClass::JALR) target = (a + imm) & ~uint64_t{1};
      e.result = f.pc + in.length();
      if (e.taken) {
        if (misaligned_target(target, cfg_.isa)) {
          e.trap = Trap::exception(cause::kInstrMisaligned, f.pc, target);
        } else {
          e.next_pc = target;
        }
      }
      if (!e.trap) {
        const uint64_t predicted = f.pred.taken ? f.pred.target : f.pc + in.length();
        e.mispredicted = predicted != e.next_pc;
      }
      break;
    }
    case InstClass::LOAD:
    case InstClass::STORE:
      if (!issue_memory(e, a, b)) return;
      break;
    case InstClass::AMO:
      if (!issue_amo(e, a, b)) return;
      break;
    default:
      break;
  }
  finish();
}

bool Core::issue_memory(RobEntry& e, uint64_t a, uint64_t b) {
  if (cycle_ < lsu_busy_until_) {
    ++stats_.stall_fu_busy;
    return false;
  }
  const DecodedInst& in = e.f.inst;
  const unsigned width = mem_width(in.op);
  const uint64_t vaddr = a + static_cast<uint64_t>(in.imm);
  const bool store = in.klass == InstClass::STORE;
  const AccessType access = store ? AccessType::Store : AccessType::Load;

  if (vaddr % width != 0) {
    e.trap = Trap::exception(misaligned_cause(access), e.f.pc, vaddr);
    return true;
  }
  if (store && sb_.full()) {
    ++stats_.stall_fu_busy;
    return false;
  }
  const Translation t = memsys_.translate(cycle_, vaddr, access, arch_.data_priv(), arch_.csr, e.f.pc);
  if (t.ready > cycle_) lsu_busy_until_ = t.ready;
  if (t.trap) {
    e.trap = t.trap;
    e.done_at = std::max(t.ready, cycle_) + 1;
    return true;
  }
  if (t.ready > cycle_) {
    // Walk in flight; retry once the TLB holds the entry.
    ++stats_.stall_fu_busy;
    return false;
  }
  SparseMemory& phys = memsys_.memory();
  if (!phys.accessible(t.paddr, width)) {
    e.trap = Trap::exception(access_fault_cause(access), e.f.pc, vaddr);
    return true;
  }
  const auto w = static_cast<uint8_t>(width);
  if (!store) {
    if (sb_.overlaps(t.paddr, width)) {
      ++stats_.stall_sb_conflict;
      return false;
    }
    const CacheTiming c = memsys_.data(cycle_, vaddr, t.paddr, false);
    const uint64_t raw = phys.read(t.paddr, width);
    e.result = load_extend(in.op, raw);
    e.load = MemAccess{vaddr, t.paddr, raw, w, false};
    e.done_at = c.ready;
    load_issued_ = true;
    return true;
  }
  const uint64_t data = width == 8 ? b : (b & ((uint64_t{1} << (8 * width)) - 1));
  sb_.push(StoreBufferEntry{e.id, vaddr, t.paddr, data, w, false});
  e.store = MemAccess{vaddr, t.paddr, data, w, true};
  e.in_store_buffer = true;
  e.done_at = cycle_ + 1;
  return true;
}

bool Core::issue_amo(RobEntry& e, uint64_t a, uint64_t b) {
  // Atomics run alone: no older instruction in flight, no pending store.
  if (!rob_.empty() || !sb_.empty() || cycle_ < lsu_busy_until_) {
    ++stats_.stall_serialize;
    return false;
  }
  const DecodedInst& in = e.f.inst;
  const unsigned width = mem_width(in.op);
  const bool lr = is_load_reserved(in.op);
  const bool sc = is_store_conditional(in.op);
  const AccessType access = lr ? AccessType::Load : AccessType::Store;
  if (a % width != 0) {
    e.trap = Trap::exception(misaligned_cause(access), e.f.pc, a);
    return true;
  }
  const Translation t = memsys_.translate(cycle_, a, access, arch_.data_priv(), arch_.csr, e.f.pc);
  if (t.ready > cycle_) lsu_busy_until_ = t.ready;
  if (t.trap) {
    e.trap = t.trap;
    e.done_at = std::max(t.ready, cycle_) + 1;
    return true;
  }
  if (t.ready > cycle_) return false;
  SparseMemory& phys = memsys_.memory();
  if (!phys.accessible(t.paddr, width)) {
    e.trap = Trap::exception(access_fault_cause(access), e.f.pc, a);
    return true;
  }
  const auto w = static_cast<uint8_t>(width);
  const uint64_t mask = width == 8 ? ~uint64_t{0} : 0xffffffffu;
  const CacheTiming c = memsys_.data(cycle_, a, t.paddr, !lr);
  if (lr) {
    const uint64_t raw = phys.read(t.paddr, width);
    e.result = load_extend(in.op, raw);
    e.load = MemAccess{a, t.paddr, raw, w, false};
    e.set_reservation = t.paddr;
  } else if (sc) {
    const bool ok = arch_.reservation && *arch_.reservation == t.paddr;
    e.clear_reservation = true;
    if (ok) {
      phys.write(t.paddr, width, b & mask);
      e.store = MemAccess{a, t.paddr, b & mask, w, true};
    }
    e.result = ok ? 0 : 1;
  } else {
    const uint64_t raw = phys.read(t.paddr, width);
    const uint64_t next = amo_compute(in.op, raw, b);
    phys.write(t.paddr, width, next);
    e.load = MemAccess{a, t.paddr, raw, w, false};
    e.store = MemAccess{a, t.paddr, next, w, true};
    e.result = load_extend(in.op, raw);
  }
  e.done_at = c.ready;
  return true;
}

// ------------------------------------------------ store buffer and decode

void Core::drain_store_buffer() {
  if (!sb_.head_committed() || cycle_ < sb_busy_until_) return;
  // Loads win the D$ port this cycle.
  if (load_issued_) return;
  const StoreBufferEntry s = sb_.front();
  const CacheTiming c = memsys_.data(cycle_, s.vaddr, s.paddr, true);
  memsys_.memory().write(s.paddr, s.width, s.data);
  sb_busy_until_ = c.hit ? cycle_ + 1 : c.ready;
  sb_.pop();
  ++stats_.sb_drained;
}

void Core::drain_stores_now() {
  while (!sb_.empty() && sb_.head_committed()) {
    const StoreBufferEntry& s = sb_.front();
    memsys_.memory().write(s.paddr, s.width, s.data);
    sb_.pop();
  }
  sb_.drop_speculative();
}

void Core::decode() {
  if (iq_.size() >= cfg_.backend.issue_queue_depth) return;
  if (!frontend_.has_ready(cycle_)) return;
  iq_.push_back(IqEntry{frontend_.front(), cycle_ + 1});
  frontend_.pop();
}

}  // namespace rvsim
