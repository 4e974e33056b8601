#include "rvsim/energy/energy.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rvsim {

namespace {

constexpr std::array<std::string_view, kNumEnergyUnits> kUnits = {
    "PC",     "IF.I$", "IF.Rest", "ID.Dec", "ID.Rest", "Issue", "EX.L/S", "EX.VM",
    "EX.Mult", "EX.ALU", "EX.D$", "EX.Rest", "WB", "CSR", "CTS", "Rest"};

constexpr std::array<std::string_view, kNumOpClasses> kClassNames = {
    "Mul", "Div", "LS_VM", "LS_noVM", "ALU", "IGEMM"};

constexpr double kRowTolerance = 0.005;

// Per-unit pJ per instruction at 0.8 V; columns follow kUnits.
constexpr std::array<UnitVector, kNumOpClasses> kDefaultPj = {{
    {0.30, 4.72, 0.51, 0.01, 0.09, 1.42, 0.22, 3.46, 0.97, 0.02, 5.53, 0.07, 0.05, 0.22, 4.25, 0.76},
    {0.25, 3.19, 0.35, 0.00, 0.02, 1.11, 0.22, 3.43, 0.68, 0.00, 5.54, 0.05, 0.02, 0.20, 4.07, 0.81},
    {0.32, 4.63, 0.54, 0.01, 0.09, 1.38, 0.30, 3.50, 0.09, 0.03, 9.18, 0.18, 0.06, 0.22, 4.06, 0.62},
    {0.30, 4.39, 0.51, 0.00, 0.07, 1.36, 0.30, 3.48, 0.07, 0.02, 9.12, 0.17, 0.06, 0.22, 4.04, 0.64},
    {0.30, 4.36, 0.50, 0.05, 0.13, 1.69, 0.24, 3.47, 0.11, 0.03, 5.53, 0.08, 0.08, 0.24, 4.05, 0.72},
    {0.61, 10.17, 1.59, 0.19, 0.65, 5.88, 0.61, 3.84, 4.41, 0.71, 13.75, 1.00, 0.31, 1.12, 4.68, 2.28},
}};
constexpr std::array<double, kNumOpClasses> kDefaultTotals = {22.60, 19.94, 25.21, 24.75, 21.58, 51.80};
constexpr UnitVector kDefaultLeakage = {0.02, 0.11, 0.02, 0.00, 0.00, 0.12, 0.02, 0.07,
                                        0.08, 0.01, 0.33, 0.04, 0.01, 0.05, 0.00, 0.20};
constexpr double kDefaultLeakageTotal = 1.08;

constexpr double kFmaxLowV = 0.5, kFmaxLowMHz = 220.0;
constexpr double kFmaxHighV = 1.15, kFmaxHighMHz = 1700.0;

double sum(const UnitVector& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

UnitVector read_units(const nlohmann::json& obj, const std::string& where, double& total) {
  if (!obj.is_object()) throw std::runtime_error(where + ": expected an object");
  UnitVector v{};
  for (size_t u = 0; u < kNumEnergyUnits; ++u) {
    const std::string key(kUnits[u]);
    if (!obj.contains(key)) throw std::runtime_error(where + ": missing unit '" + key + "'");
    v[u] = obj.at(key).get<double>();
  }
  if (!obj.contains("total")) throw std::runtime_error(where + ": missing 'total'");
  total = obj.at("total").get<double>();
  return v;
}

}  // namespace

std::string_view op_class_name(OpClass c) { return kClassNames[static_cast<size_t>(c)]; }

const std::array<std::string_view, kNumEnergyUnits>& energy_unit_names() { return kUnits; }

EnergyTable EnergyTable::defaults() {
  EnergyTable t;
  t.pj = kDefaultPj;
  t.expected_total = kDefaultTotals;
  t.leakage_mw = kDefaultLeakage;
  t.expected_leakage_total = kDefaultLeakageTotal;
  return t;
}

double EnergyTable::row_sum(OpClass c) const { return sum(pj[static_cast<size_t>(c)]); }
double EnergyTable::leakage_sum() const { return sum(leakage_mw); }

void EnergyTable::validate() const {
  for (size_t c = 0; c < kNumOpClasses; ++c) {
    for (double v : pj[c]) {
      if (v < 0 || !std::isfinite(v)) {
        throw std::runtime_error("energy table: negative or non-finite entry in " +
                                 std::string(kClassNames[c]));
      }
    }
    const double s = sum(pj[c]);
    if (std::abs(s - expected_total[c]) > kRowTolerance) {
      std::ostringstream msg;
      msg << "energy table: row " << kClassNames[c] << " sums to " << s << ", expected "
          << expected_total[c];
      throw std::runtime_error(msg.str());
    }
  }
  for (double v : leakage_mw) {
    if (v < 0 || !std::isfinite(v)) throw std::runtime_error("energy table: negative leakage");
  }
  if (std::abs(leakage_sum() - expected_leakage_total) > kRowTolerance) {
    std::ostringstream msg;
    msg << "energy table: leakage sums to " << leakage_sum() << ", expected "
        << expected_leakage_total;
    throw std::runtime_error(msg.str());
  }
  if (!(reference_vdd > 0)) throw std::runtime_error("energy table: bad reference_vdd");
}

EnergyTable EnergyTable::parse(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("energy table: ") + e.what());
  }
  EnergyTable t;
  try {
    t.reference_vdd = j.value("reference_vdd", 0.8);
    const auto& classes = j.at("classes");
    for (size_t c = 0; c < kNumOpClasses; ++c) {
      const std::string name(kClassNames[c]);
      if (!classes.contains(name)) throw std::runtime_error("energy table: missing class " + name);
      t.pj[c] = read_units(classes.at(name), name, t.expected_total[c]);
    }
    t.leakage_mw = read_units(j.at("leakage_mw"), "leakage_mw", t.expected_leakage_total);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("energy table: ") + e.what());
  }
  t.validate();
  return t;
}

EnergyTable EnergyTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open energy table " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string EnergyTable::to_json() const {
  nlohmann::ordered_json j;
  j["reference_vdd"] = reference_vdd;
  j["units"] = kUnits;
  auto row = [](const UnitVector& v, double total) {
    nlohmann::ordered_json r;
    for (size_t u = 0; u < kNumEnergyUnits; ++u) r[std::string(kUnits[u])] = v[u];
    r["total"] = total;
    return r;
  };
  for (size_t c = 0; c < kNumOpClasses; ++c) {
    j["classes"][std::string(kClassNames[c])] = row(pj[c], expected_total[c]);
  }
  j["leakage_mw"] = row(leakage_mw, expected_leakage_total);
  return j.dump(2);
}

OpClass classify(const DecodedInst& inst, bool vm_active) {
  switch (inst.klass) {
    case InstClass::MUL: return OpClass::Mul;
    case InstClass::DIV: return OpClass::Div;
    case InstClass::LOAD:
    case InstClass::STORE:
    case InstClass::AMO:
      return vm_active ? OpClass::LsVm : OpClass::LsNoVm;
    default: return OpClass::Alu;
  }
}

double fmax_mhz(double vdd) {
  if (!(vdd >= kMinVdd) || !(vdd <= kMaxVdd)) {
    throw std::out_of_range("supply voltage outside 0.5 V .. 1.15 V");
  }
  if (vdd == kFmaxHighV) return kFmaxHighMHz;
  const double slope = (kFmaxHighMHz - kFmaxLowMHz) / (kFmaxHighV - kFmaxLowV);
  return kFmaxLowMHz + (vdd - kFmaxLowV) * slope;
}

void EnergyAccumulator::add(OpClass c, uint64_t count) { counts_[static_cast<size_t>(c)] += count; }

void EnergyAccumulator::merge(const EnergyAccumulator& other) {
  for (size_t c = 0; c < kNumOpClasses; ++c) counts_[c] += other.counts_[c];
}

uint64_t EnergyAccumulator::total_ops() const {
  return std::accumulate(counts_.begin(), counts_.end(), uint64_t{0});
}

UnitVector EnergyAccumulator::unit_pj(const EnergyTable& t) const {
  UnitVector v{};
  for (size_t c = 0; c < kNumOpClasses; ++c) {
    for (size_t u = 0; u < kNumEnergyUnits; ++u) v[u] += static_cast<double>(counts_[c]) * t.pj[c][u];
  }
  return v;
}

double EnergyAccumulator::dynamic_pj(const EnergyTable& t) const {
  double total = 0;
  for (size_t c = 0; c < kNumOpClasses; ++c) total += static_cast<double>(counts_[c]) * t.row_sum(static_cast<OpClass>(c));
  return total;
}

EnergyReport finalize(const EnergyAccumulator& acc, const EnergyTable& table, uint64_t cycles,
                      const OperatingPoint& op) {
  EnergyReport r;
  const double fmax = fmax_mhz(op.vdd);
  const double freq = op.effective_freq();
  if (freq > fmax + 1e-9) {
    std::ostringstream msg;
    msg << "frequency " << freq << " MHz exceeds fmax " << fmax << " MHz at " << op.vdd << " V";
    throw std::invalid_argument(msg.str());
  }
  r.vdd = op.vdd;
  r.freq_mhz = freq;
  r.fbb = op.fbb;
  r.uncalibrated_voltage = std::abs(op.vdd - table.reference_vdd) > 1e-9;
  r.class_counts = acc.class_counts();
  r.ops = acc.total_ops();
  r.cycles = cycles;
  r.unit_dynamic_pj = acc.unit_pj(table);
  r.dynamic_pj = acc.dynamic_pj(table);
  r.runtime_s = static_cast<double>(cycles) / (freq * 1e6);
  for (size_t u = 0; u < kNumEnergyUnits; ++u) {
    // mW * s = mJ = 1e9 pJ
    r.unit_leakage_pj[u] = table.leakage_mw[u] * r.runtime_s * 1e9;
  }
  r.leakage_pj = table.leakage_sum() * r.runtime_s * 1e9;
  r.total_pj = r.dynamic_pj + r.leakage_pj;
  if (r.runtime_s > 0) r.avg_power_w = r.total_pj * 1e-12 / r.runtime_s;
  if (r.total_pj > 0) r.ops_per_s_per_w = static_cast<double>(r.ops) / (r.total_pj * 1e-12);
  return r;
}

}  // namespace rvsim
