#pragma once

#include <string>
#include <string_view>

#include "rvsim/isa/decode.hpp"

namespace rvsim {

std::string_view reg_name(unsigned r);

/// Assembly text for a decoded instruction, e.g. "addi a0, a0, -1".
/// Branch and jump targets are printed as absolute addresses from `pc`.
std::string disassemble(const DecodedInst& inst, uint64_t pc);

}  // namespace rvsim
