#include "rvsim/harness/loader.hpp"

#include <elf.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace rvsim {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::runtime_error("ELF: " + what); }

template <typename T>
T read_struct(const std::vector<uint8_t>& b, uint64_t off) {
  if (off > b.size() || b.size() - off < sizeof(T)) bad("truncated file");
  T t;
  std::memcpy(&t, b.data() + off, sizeof(T));
  return t;
}

std::string read_cstr(const std::vector<uint8_t>& b, uint64_t table_off, uint64_t table_size,
                      uint64_t idx) {
  if (idx >= table_size) bad("string index out of range");
  const uint64_t start = table_off + idx;
  uint64_t end = start;
  while (end < table_off + table_size && b[end] != 0) ++end;
  return std::string(reinterpret_cast<const char*>(b.data() + start), end - start);
}

bool in_file(const std::vector<uint8_t>& b, uint64_t off, uint64_t len) {
  return off <= b.size() && len <= b.size() - off;
}

}  // namespace

std::span<const uint8_t> ElfImage::section_bytes(const ElfSection& s) const {
  return std::span<const uint8_t>(bytes).subspan(s.offset, s.size);
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

ElfImage parse_elf(std::vector<uint8_t> bytes) {
  if (bytes.size() < EI_NIDENT || std::memcmp(bytes.data(), ELFMAG, SELFMAG) != 0) {
    bad("not an ELF file");
  }
  if (bytes[EI_CLASS] != ELFCLASS64) bad("class error: only ELF64 is supported");
  if (bytes[EI_DATA] != ELFDATA2LSB) bad("only little-endian files are supported");
  const auto eh = read_struct<Elf64_Ehdr>(bytes, 0);
  if (eh.e_machine != EM_RISCV) bad("machine is not RISC-V");
  if (eh.e_type != ET_EXEC && eh.e_type != ET_DYN) bad("not an executable");

  ElfImage img;
  img.entry = eh.e_entry;

  if (eh.e_phnum && eh.e_phentsize != sizeof(Elf64_Phdr)) bad("bad program header size");
  for (unsigned i = 0; i < eh.e_phnum; ++i) {
    const auto ph = read_struct<Elf64_Phdr>(bytes, eh.e_phoff + uint64_t{i} * sizeof(Elf64_Phdr));
    if (ph.p_type != PT_LOAD) continue;
    if (ph.p_filesz > ph.p_memsz) bad("segment file size exceeds memory size");
    if (!in_file(bytes, ph.p_offset, ph.p_filesz)) bad("segment extends past end of file");
    if (ph.p_memsz && ph.p_paddr + ph.p_memsz < ph.p_paddr) bad("segment wraps the address space");
    img.segments.push_back({ph.p_vaddr, ph.p_paddr, ph.p_filesz, ph.p_memsz, ph.p_offset});
  }
  std::vector<ElfSegment> sorted;
  for (const auto& s : img.segments) {
    if (s.memsz) sorted.push_back(s);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const ElfSegment& a, const ElfSegment& b) { return a.paddr < b.paddr; });
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1].paddr + sorted[i - 1].memsz > sorted[i].paddr) bad("overlapping segments");
  }

  if (eh.e_shnum) {
    if (eh.e_shentsize != sizeof(Elf64_Shdr)) bad("bad section header size");
    std::vector<Elf64_Shdr> sh(eh.e_shnum);
    for (unsigned i = 0; i < eh.e_shnum; ++i) {
      sh[i] = read_struct<Elf64_Shdr>(bytes, eh.e_shoff + uint64_t{i} * sizeof(Elf64_Shdr));
    }
    const bool has_names = eh.e_shstrndx != SHN_UNDEF && eh.e_shstrndx < eh.e_shnum;
    if (has_names && !in_file(bytes, sh[eh.e_shstrndx].sh_offset, sh[eh.e_shstrndx].sh_size)) {
      bad("section name table out of range");
    }
    for (const auto& s : sh) {
      ElfSection out;
      if (has_names) {
        out.name = read_cstr(bytes, sh[eh.e_shstrndx].sh_offset, sh[eh.e_shstrndx].sh_size, s.sh_name);
      }
      out.addr = s.sh_addr;
      out.offset = s.sh_offset;
      out.size = s.sh_type == SHT_NOBITS ? 0 : s.sh_size;
      out.executable = (s.sh_flags & SHF_EXECINSTR) != 0;
      if (s.sh_type != SHT_NOBITS && !in_file(bytes, s.sh_offset, s.sh_size)) {
        bad("section '" + out.name + "' extends past end of file");
      }
      img.sections.push_back(out);

      if (s.sh_type != SHT_SYMTAB) continue;
      if (s.sh_link >= eh.e_shnum || s.sh_entsize != sizeof(Elf64_Sym)) bad("bad symbol table");
      const auto& strtab = sh[s.sh_link];
      if (!in_file(bytes, strtab.sh_offset, strtab.sh_size)) bad("string table out of range");
      for (uint64_t off = 0; off + sizeof(Elf64_Sym) <= s.sh_size; off += sizeof(Elf64_Sym)) {
        const auto sym = read_struct<Elf64_Sym>(bytes, s.sh_offset + off);
        if (sym.st_name == 0) continue;
        const std::string name = read_cstr(bytes, strtab.sh_offset, strtab.sh_size, sym.st_name);
        if (name == "tohost") img.tohost = sym.st_value;
        if (name == "fromhost") img.fromhost = sym.st_value;
      }
    }
  }

  img.bytes = std::move(bytes);
  return img;
}

ElfImage read_elf(const std::string& path) { return parse_elf(read_file(path)); }

LoadedProgram load_elf(const ElfImage& elf, SparseMemory& mem) {
  for (const auto& s : elf.segments) {
    mem.write_bytes(s.paddr, std::span<const uint8_t>(elf.bytes).subspan(s.offset, s.filesz));
    if (s.memsz > s.filesz) {
      const std::vector<uint8_t> zeros(s.memsz - s.filesz, 0);
      mem.write_bytes(s.paddr + s.filesz, zeros);
    }
  }
  // Symbols carry link-time (virtual) addresses; map them through the
  // containing segment.
  auto to_phys = [&](std::optional<uint64_t> v) -> std::optional<uint64_t> {
    if (!v) return v;
    for (const auto& s : elf.segments) {
      if (*v >= s.vaddr && *v < s.vaddr + s.memsz) return s.paddr + (*v - s.vaddr);
    }
    return v;
  };
  return LoadedProgram{elf.entry, to_phys(elf.tohost), to_phys(elf.fromhost)};
}

LoadedProgram load_elf(const std::string& path, SparseMemory& mem) {
  return load_elf(read_elf(path), mem);
}

LoadedProgram load_flat(const std::string& path, uint64_t base, uint64_t entry, SparseMemory& mem) {
  const std::vector<uint8_t> bytes = read_file(path);
  mem.write_bytes(base, bytes);
  return LoadedProgram{entry, std::nullopt, std::nullopt};
}

}  // namespace rvsim
