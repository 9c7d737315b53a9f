#pragma once

#include <cstdint>
#include <vector>

namespace apsense::imagery {

/// 8-bit raster, interleaved row-major storage: (y * w + x) * c + ch.
/// Channel order is RGB for 3-channel images, single plane for gray.
struct ImageU8 {
  int h = 0;
  int w = 0;
  int c = 0;
  std::vector<std::uint8_t> v;

  ImageU8() = default;
  ImageU8(int h_, int w_, int c_, std::uint8_t fill = 0)
      : h(h_), w(w_), c(c_),
        v(static_cast<std::size_t>(h_) * w_ * c_, fill) {}

  std::uint8_t& at(int y, int x, int ch) {
    return v[(static_cast<std::size_t>(y) * w + x) * c + ch];
  }
  std::uint8_t at(int y, int x, int ch) const {
    return v[(static_cast<std::size_t>(y) * w + x) * c + ch];
  }

  bool empty() const { return v.empty(); }
};

}  // namespace apsense::imagery
