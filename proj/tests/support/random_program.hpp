#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "program_builder.hpp"
#include "rvsim/harness/simulator.hpp"

namespace rvtest {

struct RandomProgramOptions {
  uint64_t seed = 1;
  unsigned slots = 400;  // random instruction groups in the body
  bool compressed = true;
  bool muldiv = true;
  bool memory = true;
  bool control = true;  // branches, loops, calls, indirect jumps
  bool csr = true;
  bool traps = true;  // ecall/ebreak/illegal/misaligned, resumed by the handler
  bool fences = true;
  bool supervisor_vm = false;  // run the body in S-mode under SV39
  bool interrupts = false;     // enable M-mode interrupts; see random_irq_source
};

/// A self-contained program: code at kCodeBase, initial data at kDataBase,
/// optional page tables, ending with a pass() to kTohost. Traps return to
/// the instruction after the faulting one; interrupts mask their own source.
struct GeneratedProgram {
  std::vector<uint8_t> code;
  std::vector<uint8_t> data;
  std::vector<std::pair<uint64_t, uint64_t>> words;  // extra 64-bit writes (page tables)
  bool interrupts = false;
  uint64_t seed = 0;
};

GeneratedProgram generate_program(const RandomProgramOptions& opt);

/// Puts the program into the simulator's memory and sets entry and tohost.
void install(rvsim::Simulator& sim, const GeneratedProgram& p);

/// Level-triggered lines that change every few dozen cycles.
std::function<uint8_t(uint64_t)> random_irq_source(uint64_t seed);

/// Builds a simulator for `p` (installing an interrupt source when the
/// program expects one).
std::unique_ptr<rvsim::Simulator> make_simulator(const GeneratedProgram& p, rvsim::SimConfig cfg);

/// Virtual base of the data region when supervisor_vm is set.
inline constexpr uint64_t kVmDataBase = 0x40000000;

}  // namespace rvtest
