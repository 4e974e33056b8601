#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "encoder.hpp"
#include "program_builder.hpp"
#include "random_program.hpp"
#include "rvsim/energy/energy.hpp"
#include "rvsim/harness/simulator.hpp"

using namespace rvsim;
using namespace rvtest;

namespace {

size_t unit(std::string_view name) {
  const auto& names = energy_unit_names();
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  ADD_FAILURE() << "no unit " << name;
  return 0;
}

bool same_6_digits(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 5e-7 * std::max(std::abs(a), std::abs(b));
}

DecodedInst inst_of(uint32_t word) { return decode(word, IsaConfig{}); }

}  // namespace

TEST(EnergyTable, DefaultMultiplyRow) {
  const EnergyTable t = EnergyTable::defaults();
  const auto& mul = t.pj[static_cast<size_t>(OpClass::Mul)];
  EXPECT_NEAR(t.row_sum(OpClass::Mul), 22.60, 0.005);
  EXPECT_DOUBLE_EQ(mul[unit("EX.D$")], 5.53);
  EXPECT_DOUBLE_EQ(mul[unit("IF.I$")], 4.72);
  EXPECT_DOUBLE_EQ(mul[unit("CTS")], 4.25);
  EXPECT_DOUBLE_EQ(mul[unit("EX.VM")], 3.46);
}

TEST(EnergyTable, DefaultRowsMatchStatedTotals) {
  const EnergyTable t = EnergyTable::defaults();
  EXPECT_NO_THROW(t.validate());
  const double totals[] = {22.60, 19.94, 25.21, 24.75, 21.58, 51.80};
  for (size_t c = 0; c < kNumOpClasses; ++c) {
    EXPECT_NEAR(t.row_sum(static_cast<OpClass>(c)), totals[c], 0.005) << op_class_name(static_cast<OpClass>(c));
  }
  EXPECT_NEAR(t.leakage_sum(), 1.08, 0.005);
  EXPECT_EQ(energy_unit_names().size(), 16u);
}

TEST(EnergyTable, RejectsRowOffByMoreThanTolerance) {
  EnergyTable t = EnergyTable::defaults();
  t.pj[static_cast<size_t>(OpClass::Alu)][unit("WB")] += 0.006;
  EXPECT_THROW(t.validate(), std::runtime_error);
  t = EnergyTable::defaults();
  t.pj[static_cast<size_t>(OpClass::Alu)][unit("WB")] += 0.004;
  EXPECT_NO_THROW(t.validate());
  t = EnergyTable::defaults();
  t.leakage_mw[unit("Rest")] -= 0.01;
  EXPECT_THROW(t.validate(), std::runtime_error);
  t = EnergyTable::defaults();
  t.pj[0][0] = -0.30;
  t.expected_total[0] -= 0.60;
  EXPECT_THROW(t.validate(), std::runtime_error);
}

TEST(EnergyTable, JsonRoundTrip) {
  const EnergyTable t = EnergyTable::defaults();
  const EnergyTable back = EnergyTable::parse(t.to_json());
  EXPECT_EQ(back.pj, t.pj);
  EXPECT_EQ(back.leakage_mw, t.leakage_mw);
  EXPECT_EQ(back.expected_total, t.expected_total);
}

TEST(EnergyTable, ShippedDataFileMatchesDefaults) {
  const EnergyTable t = EnergyTable::load(std::string(RVSIM_DATA_DIR) + "/energy_table_default.json");
  EXPECT_EQ(t.pj, EnergyTable::defaults().pj);
}

TEST(EnergyTable, ParseErrors) {
  EXPECT_THROW(EnergyTable::parse("{"), std::runtime_error);
  EXPECT_THROW(EnergyTable::parse("{}"), std::runtime_error);
  std::string text = EnergyTable::defaults().to_json();
  text.replace(text.find("\"CTS\"", text.find("\"classes\"")), 5, "\"CTZ\"");
  EXPECT_THROW(EnergyTable::parse(text), std::runtime_error);
}

TEST(EnergyAccounting, AluPlusDivide) {
  EnergyAccumulator acc;
  acc.add(OpClass::Alu);
  acc.add(OpClass::Div);
  EXPECT_NEAR(acc.dynamic_pj(EnergyTable::defaults()), 41.52, 0.01);
}

TEST(EnergyAccounting, UnitBreakdownSumsToTotal) {
  const EnergyTable t = EnergyTable::defaults();
  EnergyAccumulator acc;
  acc.add(OpClass::Mul, 7);
  acc.add(OpClass::LsVm, 11);
  acc.add(OpClass::Alu, 1000);
  const UnitVector v = acc.unit_pj(t);
  double s = 0;
  for (double x : v) s += x;
  EXPECT_NEAR(s, acc.dynamic_pj(t), 1e-6);
  EXPECT_NEAR(acc.dynamic_pj(t), 7 * 22.60 + 11 * 25.21 + 1000 * 21.58, 1000 * 0.005 + 18 * 0.005);
}

TEST(EnergyAccounting, Additivity) {
  const EnergyTable t = EnergyTable::defaults();
  EnergyAccumulator a, b, both;
  a.add(OpClass::Mul, 3);
  a.add(OpClass::LsNoVm, 5);
  b.add(OpClass::Div, 2);
  b.add(OpClass::Mul, 4);
  both.merge(a);
  both.merge(b);
  EXPECT_NEAR(both.dynamic_pj(t), a.dynamic_pj(t) + b.dynamic_pj(t), 1e-9);
  EXPECT_EQ(both.count(OpClass::Mul), 7u);
  EXPECT_EQ(both.total_ops(), 14u);
}

TEST(EnergyAccounting, ZeroRun) {
  const EnergyReport r = finalize(EnergyAccumulator{}, EnergyTable::defaults(), 0, OperatingPoint{});
  EXPECT_EQ(r.total_pj, 0.0);
  EXPECT_EQ(r.ops, 0u);
  EXPECT_EQ(r.avg_power_w, 0.0);
  EXPECT_EQ(r.ops_per_s_per_w, 0.0);
  EXPECT_FALSE(std::isnan(r.runtime_s));
}

TEST(EnergyAccounting, LeakageOverOneMillisecond) {
  OperatingPoint op;
  op.vdd = 1.0;
  op.freq_mhz = 1000;
  const EnergyReport r = finalize(EnergyAccumulator{}, EnergyTable::defaults(), 1'000'000, op);
  EXPECT_NEAR(r.runtime_s, 1e-3, 1e-15);
  EXPECT_NEAR(r.leakage_pj, 1.08e6, 1.0);  // 1.08 uJ
  EXPECT_TRUE(r.uncalibrated_voltage);
}

TEST(EnergyAccounting, EfficiencyIdentity) {
  EnergyAccumulator acc;
  acc.add(OpClass::Alu, 123456);
  acc.add(OpClass::Mul, 789);
  acc.add(OpClass::LsNoVm, 4321);
  const EnergyReport r = finalize(acc, EnergyTable::defaults(), 200000, OperatingPoint{});
  const double ops_per_s = static_cast<double>(r.ops) / r.runtime_s;
  EXPECT_TRUE(same_6_digits(r.ops_per_s_per_w, ops_per_s / r.avg_power_w));
  EXPECT_TRUE(same_6_digits(r.total_pj, r.dynamic_pj + r.leakage_pj));
  EXPECT_FALSE(r.uncalibrated_voltage);
}

TEST(OperatingPoints, FmaxLine) {
  EXPECT_DOUBLE_EQ(fmax_mhz(0.5), 220.0);
  EXPECT_DOUBLE_EQ(fmax_mhz(1.15), 1700.0);
  EXPECT_NEAR(fmax_mhz(0.825), 960.0, 1e-9);
  EXPECT_THROW(fmax_mhz(0.49), std::out_of_range);
  EXPECT_THROW(fmax_mhz(1.16), std::out_of_range);
}

TEST(OperatingPoints, DefaultFrequencyIsFmax) {
  OperatingPoint op;
  op.vdd = 0.825;
  EXPECT_NEAR(op.effective_freq(), 960.0, 1e-9);
  const EnergyReport r = finalize(EnergyAccumulator{}, EnergyTable::defaults(), 960, op);
  EXPECT_NEAR(r.runtime_s, 1e-6, 1e-15);
}

TEST(OperatingPoints, RejectsOverclock) {
  OperatingPoint op;
  op.vdd = 0.5;
  op.freq_mhz = 221;
  EXPECT_THROW(finalize(EnergyAccumulator{}, EnergyTable::defaults(), 10, op), std::invalid_argument);
  op.freq_mhz = 220;
  EXPECT_NO_THROW(finalize(EnergyAccumulator{}, EnergyTable::defaults(), 10, op));
}

TEST(Classify, InstructionClasses) {
  EXPECT_EQ(classify(inst_of(enc::mul(5, 6, 7)), false), OpClass::Mul);
  EXPECT_EQ(classify(inst_of(enc::mulw(5, 6, 7)), true), OpClass::Mul);
  EXPECT_EQ(classify(inst_of(enc::divu(5, 6, 7)), false), OpClass::Div);
  EXPECT_EQ(classify(inst_of(enc::ld(5, 6, 0)), true), OpClass::LsVm);
  EXPECT_EQ(classify(inst_of(enc::sw(5, 6, 0)), false), OpClass::LsNoVm);
  EXPECT_EQ(classify(inst_of(enc::beq(5, 6, 8)), false), OpClass::Alu);
  EXPECT_EQ(classify(inst_of(enc::jal(1, 8)), true), OpClass::Alu);
  EXPECT_EQ(classify(inst_of(enc::csrr(5, csr::kMstatus)), false), OpClass::Alu);
  EXPECT_EQ(classify(inst_of(enc::fence()), false), OpClass::Alu);
}

TEST(SimulatorEnergy, CountsMatchRetiredMix) {
  ProgramBuilder pb;
  pb.li(6, static_cast<int64_t>(kDataBase));
  pb.li(7, 3);
  for (int i = 0; i < 10; ++i) pb.emit(enc::mul(5, 7, 7));
  for (int i = 0; i < 4; ++i) pb.emit(enc::div(5, 7, 7));
  for (int i = 0; i < 6; ++i) pb.emit(enc::sd(7, 6, 8 * i));
  pb.pass();

  Simulator sim{SimConfig{}};
  sim.load_bytes(kCodeBase, pb.finish());
  sim.set_tohost(kTohost);
  uint64_t alu = 0, ls = 0;
  sim.set_observer([&](const RetireRecord& r) {
    if (r.kind != RetireKind::Retired) return;
    if (r.inst.klass == InstClass::LOAD || r.inst.klass == InstClass::STORE) {
      ++ls;
    } else if (r.inst.klass != InstClass::MUL && r.inst.klass != InstClass::DIV) {
      ++alu;
    }
  });
  const RunResult r = sim.run();
  ASSERT_EQ(r.reason, ExitReason::Pass) << r.message;
  const auto& c = r.energy.class_counts;
  EXPECT_EQ(c[static_cast<size_t>(OpClass::Mul)], 10u);
  EXPECT_EQ(c[static_cast<size_t>(OpClass::Div)], 4u);
  EXPECT_EQ(c[static_cast<size_t>(OpClass::LsNoVm)], ls);
  EXPECT_EQ(c[static_cast<size_t>(OpClass::Alu)], alu);
  EXPECT_EQ(r.energy.ops, r.counters.instret);
  EXPECT_NEAR(r.energy.dynamic_pj, 10 * 22.60 + 4 * 19.94 + ls * 24.75 + alu * 21.58, 0.01 * r.energy.ops);
}

TEST(SimulatorEnergy, VirtualMemoryLoadsChargedAsLsVm) {
  RandomProgramOptions opt;
  opt.seed = 11;
  opt.supervisor_vm = true;
  auto sim = make_simulator(generate_program(opt), SimConfig{});
  uint64_t vm_ls = 0;
  sim->set_observer([&](const RetireRecord& r) {
    if (r.kind == RetireKind::Retired && r.vm_active &&
        (r.inst.klass == InstClass::LOAD || r.inst.klass == InstClass::STORE ||
         r.inst.klass == InstClass::AMO)) {
      ++vm_ls;
    }
  });
  const RunResult r = sim->run();
  ASSERT_EQ(r.reason, ExitReason::Pass) << r.message;
  EXPECT_GT(vm_ls, 0u);
  EXPECT_EQ(r.energy.class_counts[static_cast<size_t>(OpClass::LsVm)], vm_ls);
}

TEST(SimulatorEnergy, IgemmProfileChargesEveryInstructionAtIgemmRate) {
  RandomProgramOptions opt;
  opt.seed = 12;
  SimConfig cfg;
  cfg.energy_profile = EnergyProfile::Igemm;
  auto sim = make_simulator(generate_program(opt), cfg);
  const RunResult r = sim->run();
  ASSERT_EQ(r.reason, ExitReason::Pass) << r.message;
  EXPECT_EQ(r.energy.class_counts[static_cast<size_t>(OpClass::Igemm)], r.counters.instret);
  EXPECT_NEAR(r.energy.dynamic_pj, 51.80 * static_cast<double>(r.counters.instret),
              0.005 * static_cast<double>(r.counters.instret));
}
