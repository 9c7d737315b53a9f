#include "apsense/imagery/preprocess.hpp"

#include <cmath>
#include <vector>

#include "apsense/common/error.hpp"

namespace apsense::imagery {

ImageU8 resize_bilinear(const ImageU8& img, int out_h, int out_w) {
  if (img.h <= 0 || img.w <= 0 || img.c <= 0) fail_input("resize of an empty image");
  if (out_h <= 0 || out_w <= 0) fail_input("resize target must be positive");

  const std::size_t src_plane = static_cast<std::size_t>(img.h) * img.w;
  const std::size_t dst_plane = static_cast<std::size_t>(out_h) * out_w;
  std::vector<double> src(src_plane);
  std::vector<double> dst(dst_plane);

  ImageU8 out;
  out.h = out_h;
  out.w = out_w;
  out.c = img.c;
  out.v.resize(dst_plane * static_cast<std::size_t>(img.c));

  for (int ch = 0; ch < img.c; ++ch) {
    for (std::size_t i = 0; i < src_plane; ++i) {
      src[i] = static_cast<double>(img.v[i * img.c + ch]);
    }
    nn::resize_bilinear_plane(src.data(), img.h, img.w, dst.data(), out_h, out_w);
    for (std::size_t i = 0; i < dst_plane; ++i) {
      long r = std::lround(dst[i]);
      if (r < 0) r = 0;
      if (r > 255) r = 255;
      out.v[i * img.c + ch] = static_cast<unsigned char>(r);
    }
  }
  return out;
}

nn::Tensor to_model_input(const ImageU8& img, const std::array<double, 3>& mean,
                          const std::array<double, 3>& stddev) {
  if (img.c != 3) fail_input("model input requires a 3-channel RGB image");
  if (img.h <= 0 || img.w <= 0) fail_input("model input requires a non-empty image");

  nn::Tensor t(img.h, img.w, 3);
  for (int ch = 0; ch < 3; ++ch) {
    const std::size_t c = static_cast<std::size_t>(ch);
    if (!(stddev[c] > 0.0)) fail_input("normalization std must be positive");
    double* plane = t.plane(ch);
    for (int y = 0; y < img.h; ++y) {
      for (int x = 0; x < img.w; ++x) {
        const double u = static_cast<double>(img.at(y, x, ch)) / 255.0;
        plane[static_cast<std::size_t>(y) * img.w + x] = (u - mean[c]) / stddev[c];
      }
    }
  }
  return t;
}

nn::Tensor preprocess_for(const ImageU8& img, const nn::Backbone& backbone) {
  const int edge = backbone.preferred_input_size();
  if (img.h == edge && img.w == edge) {
    return to_model_input(img, backbone.input_mean(), backbone.input_std());
  }
  return to_model_input(resize_bilinear(img, edge, edge), backbone.input_mean(),
                        backbone.input_std());
}

}  // namespace apsense::imagery
