#pragma once

#include <ostream>
#include <string>

#include "rvsim/backend/core.hpp"

namespace rvsim {

/// One JSON object per line, one line per retire record, in commit order.
///
///   {"cycle":..,"kind":"retire"|"exception"|"interrupt","pc":"0x..",
///    "ppc":"0x..","priv":"M","asm":"..","reg":{"rd":..,"value":"0x.."},
///    "mem":[{"op":"load"|"store","vaddr":..,"paddr":..,"data":..,"width":..}],
///    "trap":{"cause":"0x..","tval":"0x.."}}
///
/// "reg", "mem" and "trap" are present only when they apply.
std::string format_trace_record(const RetireRecord& r);

class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out) : out_(out) {}
  void write(const RetireRecord& r) { out_ << format_trace_record(r) << '\n'; }

 private:
  std::ostream& out_;
};

}  // namespace rvsim
