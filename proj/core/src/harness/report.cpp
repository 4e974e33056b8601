#include "rvsim/harness/report.hpp"

#include <fmt/format.h>

#include <json.hpp>

namespace rvsim {

namespace {

std::string format_value(const ReportValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          return fmt::format("{}", x);
        }
      },
      v);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

ReportFields report_fields(const RunResult& r) {
  const PerfCounters& c = r.counters;
  const EnergyReport& e = r.energy;
  ReportFields f = {
      {"exit", std::string(exit_reason_name(r.reason))},
      {"exit_code", static_cast<uint64_t>(r.exit_code())},
      {"tohost", r.tohost},
      {"cycles", c.cycles},
      {"instret", c.instret},
      {"ipc", c.ipc()},
      {"icache_miss", c.icache_miss},
      {"dcache_miss", c.dcache_miss},
      {"itlb_miss", c.itlb_miss},
      {"dtlb_miss", c.dtlb_miss},
      {"loads", c.loads},
      {"stores", c.stores},
      {"exceptions", c.exceptions},
      {"branches", c.branches},
      {"branch_mispredicts", c.branch_mispredicts},
      {"mispredict_rate", c.mispredict_rate()},
      {"btb_hits", c.btb_hits},
      {"ras_hits", c.ras_hits},
      {"energy.vdd", e.vdd},
      {"energy.freq_mhz", e.freq_mhz},
      {"energy.fbb", e.fbb},
      {"energy.uncalibrated_voltage", e.uncalibrated_voltage},
      {"energy.unmeasured_classes_as", std::string("ALU")},
      {"energy.ops", e.ops},
      {"energy.runtime_s", e.runtime_s},
      {"energy.dynamic_pj", e.dynamic_pj},
      {"energy.leakage_pj", e.leakage_pj},
      {"energy.total_pj", e.total_pj},
      {"energy.avg_power_w", e.avg_power_w},
      {"energy.ops_per_s_per_w", e.ops_per_s_per_w},
  };
  for (size_t i = 0; i < kNumOpClasses; ++i) {
    f.emplace_back(fmt::format("energy.class.{}", op_class_name(static_cast<OpClass>(i))),
                   e.class_counts[i]);
  }
  const auto& units = energy_unit_names();
  for (size_t i = 0; i < kNumEnergyUnits; ++i) {
    f.emplace_back(fmt::format("energy.unit.{}.dynamic_pj", units[i]), e.unit_dynamic_pj[i]);
  }
  for (size_t i = 0; i < kNumEnergyUnits; ++i) {
    f.emplace_back(fmt::format("energy.unit.{}.leakage_pj", units[i]), e.unit_leakage_pj[i]);
  }
  f.emplace_back("message", r.message);
  return f;
}

ReportFields report_fields(const BinaryStats& s) {
  return {
      {"instructions", s.total()},
      {"compressed", s.compressed},
      {"full", s.full},
      {"skipped_parcels", s.invalid},
      {"branches", s.branches},
      {"calls", s.calls},
      {"compression_ratio", s.compression_ratio()},
      {"branch_fraction", s.branch_fraction()},
      {"call_fraction", s.call_fraction()},
  };
}

std::string to_json(const ReportFields& f) {
  std::string out = "{\n";
  for (size_t i = 0; i < f.size(); ++i) {
    const auto& [key, value] = f[i];
    std::string v = std::holds_alternative<std::string>(value)
                        ? nlohmann::json(std::get<std::string>(value)).dump()
                        : format_value(value);
    out += fmt::format("  {}: {}{}\n", nlohmann::json(key).dump(), v, i + 1 < f.size() ? "," : "");
  }
  return out + "}\n";
}

std::string to_csv(const ReportFields& f) {
  std::string head, row;
  for (size_t i = 0; i < f.size(); ++i) {
    if (i) {
      head += ',';
      row += ',';
    }
    head += csv_cell(f[i].first);
    row += csv_cell(format_value(f[i].second));
  }
  return head + '\n' + row + '\n';
}

}  // namespace rvsim
