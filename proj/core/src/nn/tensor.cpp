#include "apsense/nn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "apsense/common/error.hpp"

namespace apsense::nn {

Tensor& Tensor::operator+=(const Tensor& o) {
  if (!same_shape(o)) fail_input("tensor shape mismatch in +=");
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& x : v) x *= s;
  return *this;
}

Tensor operator+(Tensor a, const Tensor& b) {
  a += b;
  return a;
}

Tensor operator*(Tensor a, double s) {
  a *= s;
  return a;
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) fail_input("tensor shape mismatch in hadamard");
  Tensor out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
  return out;
}

Tensor mul_per_channel(const Tensor& x, const Tensor& gate) {
  if (gate.h != 1 || gate.w != 1 || gate.c != x.c)
    fail_input("per-channel gate must have shape (1,1,C)");
  Tensor out = x;
  const std::size_t plane = static_cast<std::size_t>(x.h) * x.w;
  for (int ch = 0; ch < x.c; ++ch) {
    const double g = gate.v[ch];
    double* p = out.plane(ch);
    for (std::size_t i = 0; i < plane; ++i) p[i] *= g;
  }
  return out;
}

Tensor mul_per_pixel(const Tensor& x, const Tensor& gate) {
  if (gate.h != x.h || gate.w != x.w || gate.c != 1)
    fail_input("per-pixel gate must have shape (H,W,1)");
  Tensor out = x;
  const std::size_t plane = static_cast<std::size_t>(x.h) * x.w;
  for (int ch = 0; ch < x.c; ++ch) {
    double* p = out.plane(ch);
    for (std::size_t i = 0; i < plane; ++i) p[i] *= gate.v[i];
  }
  return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.h != b.h || a.w != b.w)
    fail_input("channel concat requires matching spatial shape");
  Tensor out(a.h, a.w, a.c + b.c);
  std::copy(a.v.begin(), a.v.end(), out.v.begin());
  std::copy(b.v.begin(), b.v.end(), out.v.begin() + a.v.size());
  return out;
}

void fill_uniform(Tensor& t, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& x : t.v) x = dist(rng);
}

void resize_bilinear_plane(const double* src, int src_h, int src_w,
                           double* dst, int dst_h, int dst_w) {
  const double sy = static_cast<double>(src_h) / dst_h;
  const double sx = static_cast<double>(src_w) / dst_w;
  for (int y = 0; y < dst_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(src_h - 1));
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, src_h - 1);
    const double wy = fy - y0;
    for (int x = 0; x < dst_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(src_w - 1));
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, src_w - 1);
      const double wx = fx - x0;
      const double top = src[y0 * src_w + x0] * (1.0 - wx) + src[y0 * src_w + x1] * wx;
      const double bot = src[y1 * src_w + x0] * (1.0 - wx) + src[y1 * src_w + x1] * wx;
      dst[y * dst_w + x] = top * (1.0 - wy) + bot * wy;
    }
  }
}

}  // namespace apsense::nn
