#include "rvsim/mmu/plru.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace rvsim {

TreePlru::TreePlru(unsigned ways) : ways_(ways), levels_(0) {
  if (ways == 0 || !std::has_single_bit(ways)) {
    throw std::invalid_argument("tree-PLRU needs a power-of-two way count");
  }
  levels_ = static_cast<unsigned>(std::countr_zero(ways));
  bits_.assign(ways > 1 ? ways - 1 : 0, 0);
}

void TreePlru::touch(unsigned way) {
  unsigned node = 0;
  for (unsigned l = 0; l < levels_; ++l) {
    const unsigned dir = (way >> (levels_ - 1 - l)) & 1;
    // Point away from the path just used.
    bits_[node] = static_cast<uint8_t>(dir ^ 1);
    node = 2 * node + 1 + dir;
  }
}

unsigned TreePlru::victim() const {
  unsigned node = 0;
  unsigned way = 0;
  for (unsigned l = 0; l < levels_; ++l) {
    const unsigned dir = bits_[node];
    way = (way << 1) | dir;
    node = 2 * node + 1 + dir;
  }
  return way;
}

void TreePlru::reset() { std::fill(bits_.begin(), bits_.end(), 0); }

}  // namespace rvsim
