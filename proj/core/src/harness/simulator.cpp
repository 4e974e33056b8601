#include "rvsim/harness/simulator.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "rvsim/isa/disasm.hpp"

namespace rvsim {

std::string_view exit_reason_name(ExitReason r) {
  switch (r) {
    case ExitReason::Pass: return "pass";
    case ExitReason::Fail: return "fail";
    case ExitReason::Timeout: return "timeout";
    case ExitReason::Divergence: return "divergence";
    case ExitReason::NoHandler: return "no-handler";
    case ExitReason::Error: return "error";
  }
  return "error";
}

int RunResult::exit_code() const {
  switch (reason) {
    case ExitReason::Pass: return 0;
    case ExitReason::Fail: return 1;
    default: return 2;
  }
}

namespace {

std::string dump_state(const char* who, const ArchState& s) {
  std::string out = fmt::format("{}: pc=0x{:x} priv={}\n", who, s.pc, priv_name(s.priv));
  for (unsigned r = 0; r < 32; ++r) {
    out += fmt::format("  x{:<2} {:<4} 0x{:016x}{}", r, reg_name(r), s.reg(r), r % 4 == 3 ? "\n" : "");
  }
  out += fmt::format("  mstatus=0x{:x} mepc=0x{:x} mcause=0x{:x} mtval=0x{:x} satp=0x{:x}\n",
                     s.csr.mstatus, s.csr.mepc, s.csr.mcause, s.csr.mtval, s.csr.satp);
  return out;
}

std::string describe_trap(const std::optional<Trap>& t) {
  if (!t) return "none";
  return fmt::format("cause=0x{:x} tval=0x{:x}", t->cause, t->tval);
}

std::string describe_mem(const std::optional<MemAccess>& m) {
  if (!m) return "none";
  return fmt::format("vaddr=0x{:x} paddr=0x{:x} data=0x{:x} width={}", m->vaddr, m->paddr, m->data,
                     m->width);
}

std::optional<RegWrite> visible_write(const std::optional<RegWrite>& w) {
  if (w && w->rd == 0) return std::nullopt;
  return w;
}

}  // namespace

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  table_ = cfg_.energy_table.empty() ? EnergyTable::defaults() : EnergyTable::load(cfg_.energy_table);
  core_ = std::make_unique<Core>(cfg_.core, mem_);
}

Simulator::~Simulator() = default;

void Simulator::load_elf(const std::string& path) { load_elf(read_elf(path)); }

void Simulator::load_elf(const ElfImage& elf) {
  const LoadedProgram p = rvsim::load_elf(elf, mem_);
  entry_ = p.entry;
  if (p.tohost) tohost_ = p.tohost;
}

void Simulator::load_flat(const std::string& path, uint64_t base, uint64_t entry) {
  entry_ = rvsim::load_flat(path, base, entry, mem_).entry;
}

void Simulator::load_bytes(uint64_t base, std::span<const uint8_t> bytes, std::optional<uint64_t> entry) {
  mem_.write_bytes(base, bytes);
  entry_ = entry.value_or(base);
}

void Simulator::inject_register_fault(uint64_t after_retired, unsigned reg, uint64_t mask) {
  fault_ = Fault{after_retired, reg, mask};
}

RunResult Simulator::run() {
  RunResult res;
  core_->reset(entry_);
  if (cfg_.lockstep) {
    oracle_mem_ = std::make_unique<SparseMemory>(mem_);
    oracle_ = std::make_unique<FunctionalHart>(*oracle_mem_, cfg_.core.isa);
    oracle_->state().pc = entry_;
    oracle_->set_auto_counters(false);
  }
  if (!cfg_.trace_path.empty()) {
    trace_file_.open(cfg_.trace_path);
    if (!trace_file_) {
      res.reason = ExitReason::Error;
      res.message = "cannot open trace file " + cfg_.trace_path;
      return res;
    }
    trace_ = std::make_unique<TraceWriter>(trace_file_);
  }
  core_->set_retire_hook([this](const RetireRecord& r) { on_retire(r); });

  try {
    while (!stop_ && core_->cycle() < cfg_.max_cycles) {
      if (irq_source_) core_->set_irq_lines(irq_source_(core_->cycle()));
      core_->tick();
    }
  } catch (const std::exception& e) {
    stop_ = Stop{ExitReason::Error, fmt::format("cycle {}: {}", core_->cycle(), e.what())};
  }
  core_->set_retire_hook(nullptr);
  if (!stop_) {
    stop_ = Stop{ExitReason::Timeout, fmt::format("max_cycles {} reached", cfg_.max_cycles)};
  }

  if (oracle_ && (stop_->reason == ExitReason::Pass || stop_->reason == ExitReason::Fail)) {
    core_->drain_stores_now();
    if (!mem_.same_contents(*oracle_mem_)) {
      stop_ = Stop{ExitReason::Divergence, "memory contents differ from the oracle at exit"};
    }
  }
  if (trace_) trace_file_.flush();

  res.reason = stop_->reason;
  res.message = stop_->message;
  res.tohost = tohost_value_;
  res.counters = PerfCounters::from_core(*core_);
  res.energy = finalize(energy_, table_, res.counters.cycles, cfg_.op);
  return res;
}

void Simulator::on_retire(const RetireRecord& r) {
  if (stop_) return;
  if (r.kind == RetireKind::Retired) {
    ++retired_;
    energy_.add(cfg_.energy_profile == EnergyProfile::Igemm ? OpClass::Igemm
                                                            : classify(r.inst, r.vm_active));
    if (fault_ && retired_ == fault_->after) {
      ArchState& a = core_->arch();
      a.set_reg(fault_->reg, a.reg(fault_->reg) ^ fault_->mask);
    }
  }
  if (oracle_) {
    if (auto msg = check_lockstep(r)) {
      stop_ = Stop{ExitReason::Divergence, *msg};
      return;
    }
  }
  if (trace_) trace_->write(r);
  if (observer_) observer_(r);

  if (r.kind == RetireKind::Retired && r.store && tohost_ && r.store->paddr == *tohost_ &&
      r.store->data != 0) {
    tohost_value_ = r.store->data;
    if (tohost_value_ == 1) {
      stop_ = Stop{ExitReason::Pass, "tohost = 1"};
    } else {
      stop_ = Stop{ExitReason::Fail, fmt::format("tohost = 0x{:x} (test {})", tohost_value_,
                                                 tohost_value_ >> 1)};
    }
    return;
  }
  if (r.trap && core_->arch().pc == 0) {
    stop_ = Stop{ExitReason::NoHandler,
                 fmt::format("trap {} at pc 0x{:x} with no trap vector", describe_trap(r.trap), r.pc)};
  }
}

std::optional<std::string> Simulator::check_lockstep(const RetireRecord& r) {
  FunctionalHart& o = *oracle_;
  const ArchState& core = core_->arch();
  const uint8_t lines = core_->irq_lines();
  o.state().csr.irq_lines = lines;
  const std::string where =
      fmt::format("cycle {} pc 0x{:x} ({})", r.cycle, r.pc, disassemble(r.inst, r.pc));
  auto fail = [&](const std::string& what) {
    return fmt::format("lockstep divergence at {}: {}\n{}{}", where, what, dump_state("core", core),
                       dump_state("oracle", o.state()));
  };

  if (o.state().pc != r.pc) {
    return fail(fmt::format("oracle expected pc 0x{:x}", o.state().pc));
  }
  if (r.kind == RetireKind::Interrupt) {
    const auto expected = check_pending_interrupt(o.state(), lines);
    if (!expected || !(*expected == *r.trap)) {
      return fail(fmt::format("interrupt {} not taken by oracle (oracle: {})", describe_trap(r.trap),
                              describe_trap(expected)));
    }
    o.take_trap(*r.trap);
  } else {
    o.set_counters(r.counters);
    const FunctionalHart::Step step = o.step();
    const ExecOutcome& out = step.outcome;
    if (r.kind == RetireKind::Exception) {
      if (!out.trap || !(*out.trap == *r.trap)) {
        return fail(fmt::format("core trapped with {}, oracle {}", describe_trap(r.trap),
                                describe_trap(out.trap)));
      }
    } else {
      if (out.trap) return fail("oracle trapped with " + describe_trap(out.trap));
      const auto cw = visible_write(r.reg_write);
      const auto ow = visible_write(out.reg_write);
      if (cw != ow) {
        return fail(fmt::format("register write core {} oracle {}",
                                cw ? fmt::format("x{}=0x{:x}", cw->rd, cw->value) : "none",
                                ow ? fmt::format("x{}=0x{:x}", ow->rd, ow->value) : "none"));
      }
      if (r.store != out.store) {
        return fail(fmt::format("store core [{}] oracle [{}]", describe_mem(r.store),
                                describe_mem(out.store)));
      }
      if (r.load != out.load) {
        return fail(fmt::format("load core [{}] oracle [{}]", describe_mem(r.load),
                                describe_mem(out.load)));
      }
    }
  }

  if (auto reg = core.first_reg_mismatch(o.state())) {
    return fail(fmt::format("first mismatching register x{} ({}): core 0x{:x} oracle 0x{:x}", *reg,
                            reg_name(*reg), core.reg(*reg), o.state().reg(*reg)));
  }
  if (core.pc != o.state().pc) {
    return fail(fmt::format("next pc core 0x{:x} oracle 0x{:x}", core.pc, o.state().pc));
  }
  if (!core.same_architectural_state(o.state())) {
    return fail("privilege, CSR or reservation state differs");
  }
  return std::nullopt;
}

}  // namespace rvsim
