#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rvsim/harness/analyzer.hpp"
#include "rvsim/harness/config.hpp"
#include "rvsim/harness/report.hpp"
#include "rvsim/harness/simulator.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<double> vdd, freq, fbb;
  std::optional<std::string> trace, energy_table, energy_profile, lockstep;
  std::optional<uint64_t> max_cycles;
  std::vector<std::string> sets;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "JSON config file");
    app->add_option("--vdd", vdd, "Supply voltage (energy.vdd)");
    app->add_option("--freq", freq, "Clock in MHz, 0 for fmax (energy.freq)");
    app->add_option("--fbb", fbb, "Forward body bias, recorded only (energy.fbb)");
    app->add_option("--trace", trace, "JSONL retire trace (run.trace)");
    app->add_option("--max-cycles", max_cycles, "Cycle limit (run.max_cycles)");
    app->add_option("--energy-table", energy_table, "Energy table JSON (energy.table)");
    app->add_option("--energy-profile", energy_profile, "per-class or igemm (energy.profile)")
        ->check(CLI::IsMember({"per-class", "igemm"}));
    app->add_option("--lockstep", lockstep, "Check against the functional model (run.lockstep)")
        ->check(CLI::IsMember({"on", "off"}));
    app->add_option("--set", sets, "Override any config key: section.key=value");
  }

  rvsim::SimConfig build() const {
    rvsim::SimConfig c = config.empty() ? rvsim::SimConfig{} : rvsim::SimConfig::load(config);
    for (const auto& s : sets) c.set(s);
    if (vdd) c.op.vdd = *vdd;
    if (freq) c.op.freq_mhz = *freq;
    if (fbb) c.op.fbb = *fbb;
    if (trace) c.trace_path = *trace;
    if (max_cycles) c.max_cycles = *max_cycles;
    if (energy_table) c.energy_table = *energy_table;
    if (energy_profile) c.set("energy.profile=" + *energy_profile);
    if (lockstep) c.lockstep = *lockstep == "on";
    c.validate();
    return c;
  }
};

void emit(const rvsim::ReportFields& f, const std::string& format, const std::string& path) {
  const std::string text = format == "csv" ? rvsim::to_csv(f) : rvsim::to_json(f);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RV64IMC cycle-level simulator"};
  app.require_subcommand(1);

  Overrides run_opts;
  std::string elf, format = "json", report_path;
  std::optional<uint64_t> flat_base, entry, tohost;
  auto* run = app.add_subcommand("run", "Simulate a program");
  run->add_option("program", elf, "ELF executable (or flat image with --flat)")->required();
  run_opts.add_to(run);
  run->add_option("--flat", flat_base, "Load a raw image at this physical address");
  run->add_option("--entry", entry, "Entry pc for --flat (defaults to the load address)");
  run->add_option("--tohost", tohost, "tohost address when the image has no symbol");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--report", report_path, "Write the report here instead of stdout");

  std::string analyze_elf;
  auto* analyze = app.add_subcommand("analyze", "Static instruction mix of an ELF");
  analyze->add_option("program", analyze_elf, "ELF file")->required();
  analyze->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  analyze->add_option("--report", report_path, "Write the report here instead of stdout");

  Overrides cfg_opts;
  auto* config = app.add_subcommand("config", "Print the effective configuration");
  cfg_opts.add_to(config);

  auto* table = app.add_subcommand("energy-table", "Print the built-in energy table as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      rvsim::Simulator sim(run_opts.build());
      if (flat_base) {
        sim.load_flat(elf, *flat_base, entry.value_or(*flat_base));
      } else {
        sim.load_elf(elf);
      }
      if (tohost) sim.set_tohost(*tohost);
      const rvsim::RunResult r = sim.run();
      if (!r.message.empty() && r.exit_code() != 0) std::cerr << r.message << '\n';
      emit(rvsim::report_fields(r), format, report_path);
      return r.exit_code();
    }
    if (*analyze) {
      emit(rvsim::report_fields(rvsim::analyze_binary(analyze_elf)), format, report_path);
      return 0;
    }
    if (*config) {
      std::cout << cfg_opts.build().to_json() << '\n';
      return 0;
    }
    if (*table) {
      std::cout << rvsim::EnergyTable::defaults().to_json() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "rvsim: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
