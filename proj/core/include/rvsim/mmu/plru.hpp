#pragma once

#include <cstdint>
#include <vector>

namespace rvsim {

/// Tree pseudo-LRU over a power-of-two number of ways, N-1 state bits.
/// Node i has children 2i+1 and 2i+2; a bit value of 0 points the victim
/// search to the left child, 1 to the right.
class TreePlru {
 public:
  explicit TreePlru(unsigned ways);

  /// Marks `way` most recently used.
  void touch(unsigned way);
  unsigned victim() const;
  void reset();

  unsigned ways() const { return ways_; }
  const std::vector<uint8_t>& bits() const { return bits_; }

 private:
  unsigned ways_;
  unsigned levels_;
  std::vector<uint8_t> bits_;
};

}  // namespace rvsim
