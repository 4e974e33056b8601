#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "rvsim/backend/core.hpp"
#include "rvsim/energy/energy.hpp"
#include "rvsim/harness/config.hpp"
#include "rvsim/harness/counters.hpp"
#include "rvsim/harness/loader.hpp"
#include "rvsim/harness/trace.hpp"
#include "rvsim/isa/execute.hpp"
#include "rvsim/mmu/sparse_memory.hpp"

namespace rvsim {

enum class ExitReason : uint8_t {
  Pass,        // tohost == 1
  Fail,        // tohost written with another value
  Timeout,     // max_cycles reached
  Divergence,  // lockstep mismatch
  NoHandler,   // trap taken with no trap vector installed
  Error,       // anything else the simulator rejected
};

std::string_view exit_reason_name(ExitReason r);

struct RunResult {
  ExitReason reason = ExitReason::Error;
  uint64_t tohost = 0;
  std::string message;
  PerfCounters counters;
  EnergyReport energy;

  /// 0 pass, 1 guest failure, 2 simulator error.
  int exit_code() const;
};

/// Drives one core over one program image, with optional lockstep checking
/// against the functional model and optional tracing.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg);
  ~Simulator();

  void load_elf(const std::string& path);
  void load_elf(const ElfImage& elf);
  void load_flat(const std::string& path, uint64_t base, uint64_t entry);
  /// Raw bytes at `base`; `entry` defaults to `base`.
  void load_bytes(uint64_t base, std::span<const uint8_t> bytes, std::optional<uint64_t> entry = {});
  void set_tohost(uint64_t paddr) { tohost_ = paddr; }

  /// Interrupt line levels as a function of the cycle about to execute.
  void set_irq_source(std::function<uint8_t(uint64_t)> fn) { irq_source_ = std::move(fn); }
  /// Called for every retire record after the lockstep check.
  void set_observer(std::function<void(const RetireRecord&)> fn) { observer_ = std::move(fn); }
  /// Test hook: after the n-th retired instruction, XORs `mask` into
  /// register `reg` of the timing core only.
  void inject_register_fault(uint64_t after_retired, unsigned reg, uint64_t mask);

  RunResult run();

  SparseMemory& memory() { return mem_; }
  Core& core() { return *core_; }
  const SimConfig& config() const { return cfg_; }
  uint64_t entry() const { return entry_; }
  std::optional<uint64_t> tohost() const { return tohost_; }
  /// Lockstep oracle, present while a lockstep run is active or finished.
  const FunctionalHart* oracle() const { return oracle_.get(); }
  const SparseMemory* oracle_memory() const { return oracle_mem_.get(); }
  const EnergyAccumulator& energy_accumulator() const { return energy_; }

 private:
  struct Stop {
    ExitReason reason;
    std::string message;
  };

  void on_retire(const RetireRecord& r);
  std::optional<std::string> check_lockstep(const RetireRecord& r);

  SimConfig cfg_;
  EnergyTable table_;
  SparseMemory mem_;
  std::unique_ptr<Core> core_;
  uint64_t entry_ = 0;
  std::optional<uint64_t> tohost_;

  std::unique_ptr<SparseMemory> oracle_mem_;
  std::unique_ptr<FunctionalHart> oracle_;
  EnergyAccumulator energy_;
  std::ofstream trace_file_;
  std::unique_ptr<TraceWriter> trace_;
  std::function<uint8_t(uint64_t)> irq_source_;
  std::function<void(const RetireRecord&)> observer_;

  struct Fault {
    uint64_t after = 0;
    unsigned reg = 0;
    uint64_t mask = 0;
  };
  std::optional<Fault> fault_;
  uint64_t retired_ = 0;
  std::optional<Stop> stop_;
  uint64_t tohost_value_ = 0;
};

}  // namespace rvsim
