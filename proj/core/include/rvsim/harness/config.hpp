#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rvsim/backend/core.hpp"
#include "rvsim/energy/energy.hpp"

namespace rvsim {

enum class EnergyProfile : uint8_t { PerClass, Igemm };

/// Everything a run needs besides the program image. Defaults reproduce the
/// silicon configuration.
struct SimConfig {
  CoreConfig core;

  std::string energy_table;  // empty: built-in table
  OperatingPoint op;
  EnergyProfile energy_profile = EnergyProfile::PerClass;

  uint64_t max_cycles = 100'000'000;
  bool lockstep = true;
  std::string trace_path;  // empty: no trace

  /// Parses the JSON config format on top of the defaults. Unknown keys and
  /// ill-typed values throw std::runtime_error.
  static SimConfig parse(std::string_view text);
  static SimConfig load(const std::string& path);
  /// Applies `section.key=value` on top of this config.
  void set(std::string_view assignment);
  std::string to_json() const;

  /// Throws std::invalid_argument on inconsistent geometry or an operating
  /// point outside the frequency model.
  void validate() const;
};

}  // namespace rvsim
