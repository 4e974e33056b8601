#include "rvsim/harness/analyzer.hpp"

#include "rvsim/isa/decode.hpp"

namespace rvsim {

double BinaryStats::compression_ratio() const {
  if (total() == 0) return 0.0;
  return static_cast<double>(2 * compressed + 4 * full) / static_cast<double>(4 * total());
}

double BinaryStats::branch_fraction() const {
  return total() ? static_cast<double>(branches) / total() : 0.0;
}

double BinaryStats::call_fraction() const {
  return total() ? static_cast<double>(calls) / total() : 0.0;
}

void BinaryStats::merge(const BinaryStats& o) {
  compressed += o.compressed;
  full += o.full;
  invalid += o.invalid;
  branches += o.branches;
  calls += o.calls;
}

BinaryStats analyze_code(std::span<const uint8_t> code) {
  IsaConfig isa;
  isa.ext_a = true;
  BinaryStats st;
  size_t off = 0;
  while (off + 2 <= code.size()) {
    const uint16_t lo = static_cast<uint16_t>(code[off] | (code[off + 1] << 8));
    if (lo == 0) {
      ++st.invalid;
      off += 2;
      continue;
    }
    if (is_compressed_parcel(lo)) {
      ++st.compressed;
      const DecodedInst d = decode_parcel(lo, isa);
      if (d.klass == InstClass::BRANCH) ++st.branches;
      if (d.is_call()) ++st.calls;
      off += 2;
      continue;
    }
    if (off + 4 > code.size()) {
      ++st.invalid;
      break;
    }
    const uint32_t word = lo | (static_cast<uint32_t>(code[off + 2]) << 16) |
                          (static_cast<uint32_t>(code[off + 3]) << 24);
    if ((word & 0x1f) == 0x1f || word == 0xffffffffu) {
      // 48-bit and longer encodings are not used by any standard extension.
      ++st.invalid;
      off += 2;
      continue;
    }
    ++st.full;
    const DecodedInst d = decode(word, isa);
    if (d.klass == InstClass::BRANCH) ++st.branches;
    if (d.is_call()) ++st.calls;
    off += 4;
  }
  return st;
}

BinaryStats analyze_binary(const ElfImage& elf) {
  BinaryStats st;
  for (const auto& s : elf.sections) {
    if (s.executable && s.size) st.merge(analyze_code(elf.section_bytes(s)));
  }
  return st;
}

BinaryStats analyze_binary(const std::string& path) { return analyze_binary(read_elf(path)); }

}  // namespace rvsim
