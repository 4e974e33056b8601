#include "rvsim/harness/trace.hpp"

#include <fmt/format.h>

#include "rvsim/isa/disasm.hpp"

namespace rvsim {

namespace {

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

void append_mem(std::string& out, const char* op, const MemAccess& m) {
  out += fmt::format(R"({{"op":"{}","vaddr":"0x{:x}","paddr":"0x{:x}","data":"0x{:x}","width":{}}})",
                     op, m.vaddr, m.paddr, m.data, m.width);
}

}  // namespace

std::string format_trace_record(const RetireRecord& r) {
  const char* kind = r.kind == RetireKind::Retired     ? "retire"
                     : r.kind == RetireKind::Exception ? "exception"
                                                       : "interrupt";
  std::string out = fmt::format(
      R"({{"cycle":{},"kind":"{}","pc":"0x{:x}","ppc":"0x{:x}","priv":"{}","asm":"{}")", r.cycle,
      kind, r.pc, r.pc_paddr, priv_name(r.priv), json_escape(disassemble(r.inst, r.pc)));
  if (r.reg_write && r.reg_write->rd != 0) {
    out += fmt::format(R"(,"reg":{{"rd":{},"value":"0x{:x}"}})", r.reg_write->rd, r.reg_write->value);
  }
  if (r.load || r.store) {
    out += R"(,"mem":[)";
    if (r.load) append_mem(out, "load", *r.load);
    if (r.store) {
      if (r.load) out += ',';
      append_mem(out, "store", *r.store);
    }
    out += ']';
  }
  if (r.trap) {
    out += fmt::format(R"(,"trap":{{"cause":"0x{:x}","tval":"0x{:x}"}})", r.trap->cause, r.trap->tval);
  }
  out += '}';
  return out;
}

}  // namespace rvsim
