#pragma once

#include <cstdint>

namespace rvsim {

/// Physical memory as seen by the functional model. Little-endian; accesses
/// are naturally aligned and 1, 2, 4 or 8 bytes wide.
class Memory {
 public:
  virtual ~Memory() = default;
  virtual uint64_t read(uint64_t paddr, unsigned size) const = 0;
  virtual void write(uint64_t paddr, unsigned size, uint64_t value) = 0;
  /// Physical-memory-attribute check; false raises an access fault.
  virtual bool accessible(uint64_t paddr, unsigned size) const {
    (void)paddr;
    (void)size;
    return true;
  }
};

}  // namespace rvsim
