#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rvsim/harness/analyzer.hpp"
#include "rvsim/harness/simulator.hpp"

namespace rvsim {

using ReportValue = std::variant<uint64_t, double, bool, std::string>;
using ReportFields = std::vector<std::pair<std::string, ReportValue>>;

/// Flat, ordered field list shared by every report format. Field names are
/// stable; see README.md.
ReportFields report_fields(const RunResult& r);
ReportFields report_fields(const BinaryStats& s);

std::string to_json(const ReportFields& f);
/// Header line plus one value line.
std::string to_csv(const ReportFields& f);

}  // namespace rvsim
