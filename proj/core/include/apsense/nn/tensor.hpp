#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace apsense::nn {

/// Dense rank-3 activation tensor, double precision. Storage is
/// plane-major: index (ch * h + y) * w + x. Shapes are described as
/// (H, W, C) throughout the library.
struct Tensor {
  int h = 0;
  int w = 0;
  int c = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int h_, int w_, int c_, double fill = 0.0)
      : h(h_), w(w_), c(c_),
        v(static_cast<std::size_t>(h_) * w_ * c_, fill) {}

  static Tensor zeros_like(const Tensor& t) { return Tensor(t.h, t.w, t.c); }

  std::size_t size() const { return v.size(); }

  double& at(int y, int x, int ch) {
    return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
  }
  double at(int y, int x, int ch) const {
    return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
  }

  double* plane(int ch) { return v.data() + static_cast<std::size_t>(ch) * h * w; }
  const double* plane(int ch) const {
    return v.data() + static_cast<std::size_t>(ch) * h * w;
  }

  bool same_shape(const Tensor& o) const {
    return h == o.h && w == o.w && c == o.c;
  }

  Tensor& operator+=(const Tensor& o);
  Tensor& operator*=(double s);
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator*(Tensor a, double s);

/// Elementwise product; shapes must match.
Tensor hadamard(const Tensor& a, const Tensor& b);

/// x (H,W,C) scaled per channel by gate (1,1,C).
Tensor mul_per_channel(const Tensor& x, const Tensor& gate);

/// x (H,W,C) scaled per pixel by gate (H,W,1), broadcast over channels.
Tensor mul_per_pixel(const Tensor& x, const Tensor& gate);

/// Channel concatenation of same-spatial tensors.
Tensor concat_channels(const Tensor& a, const Tensor& b);

void fill_uniform(Tensor& t, std::mt19937_64& rng, double lo, double hi);

/// Bilinear resampling of one plane with half-pixel centers
/// (src_x = (dst_x + 0.5) * sw / dw - 0.5, clamped to the raster).
void resize_bilinear_plane(const double* src, int src_h, int src_w,
                           double* dst, int dst_h, int dst_w);

}  // namespace apsense::nn
