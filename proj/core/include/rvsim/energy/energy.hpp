#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "rvsim/isa/decode.hpp"

namespace rvsim {

enum class OpClass : uint8_t { Mul, Div, LsVm, LsNoVm, Alu, Igemm };
inline constexpr size_t kNumOpClasses = 6;
inline constexpr size_t kNumEnergyUnits = 16;

std::string_view op_class_name(OpClass c);
/// Names of the 16 accounting units, in table column order.
const std::array<std::string_view, kNumEnergyUnits>& energy_unit_names();

using UnitVector = std::array<double, kNumEnergyUnits>;

/// Per-class dynamic energy (pJ per instruction, per unit) and per-unit
/// leakage power (mW), valid at the reference voltage.
struct EnergyTable {
  std::array<UnitVector, kNumOpClasses> pj{};
  std::array<double, kNumOpClasses> expected_total{};
  UnitVector leakage_mw{};
  double expected_leakage_total = 0;
  double reference_vdd = 0.8;

  /// Built-in silicon calibration.
  static EnergyTable defaults();
  /// Parses the JSON table format; throws std::runtime_error on malformed
  /// input or failed validation.
  static EnergyTable parse(std::string_view text);
  static EnergyTable load(const std::string& path);
  std::string to_json() const;

  double row_sum(OpClass c) const;
  double leakage_sum() const;
  /// Rejects negative entries and rows whose sum misses the stated total
  /// by more than 0.005.
  void validate() const;
};

/// Energy class of a retired instruction. Everything that is not a
/// multiply, divide or memory access is charged as ALU.
OpClass classify(const DecodedInst& inst, bool vm_active);

/// Linear fit through (0.5 V, 220 MHz) and (1.15 V, 1700 MHz); throws
/// std::out_of_range outside that span.
double fmax_mhz(double vdd);
inline constexpr double kMinVdd = 0.5;
inline constexpr double kMaxVdd = 1.15;

struct OperatingPoint {
  double vdd = 0.8;
  double freq_mhz = 0;  // 0: run at fmax(vdd)
  double fbb = 0;       // recorded only

  double effective_freq() const { return freq_mhz > 0 ? freq_mhz : fmax_mhz(vdd); }
};

class EnergyAccumulator {
 public:
  void add(OpClass c, uint64_t count = 1);
  void merge(const EnergyAccumulator& other);

  const std::array<uint64_t, kNumOpClasses>& class_counts() const { return counts_; }
  uint64_t count(OpClass c) const { return counts_[static_cast<size_t>(c)]; }
  uint64_t total_ops() const;
  UnitVector unit_pj(const EnergyTable& t) const;
  double dynamic_pj(const EnergyTable& t) const;

 private:
  std::array<uint64_t, kNumOpClasses> counts_{};
};

struct EnergyReport {
  UnitVector unit_dynamic_pj{};
  UnitVector unit_leakage_pj{};
  std::array<uint64_t, kNumOpClasses> class_counts{};
  uint64_t ops = 0;
  uint64_t cycles = 0;
  double dynamic_pj = 0;
  double leakage_pj = 0;
  double total_pj = 0;
  double runtime_s = 0;
  double avg_power_w = 0;
  double ops_per_s_per_w = 0;
  double vdd = 0;
  double freq_mhz = 0;
  double fbb = 0;
  bool uncalibrated_voltage = false;
};

/// Throws std::invalid_argument when the frequency exceeds fmax(vdd).
EnergyReport finalize(const EnergyAccumulator& acc, const EnergyTable& table, uint64_t cycles,
                      const OperatingPoint& op);

}  // namespace rvsim
