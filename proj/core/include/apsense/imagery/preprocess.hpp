#pragma once

#include <array>

#include "apsense/imagery/image.hpp"
#include "apsense/nn/backbone.hpp"
#include "apsense/nn/tensor.hpp"

namespace apsense::imagery {

/// Bilinear resize of an interleaved 8-bit image (half-pixel centers,
/// results rounded and clamped to 0..255). Channel count is preserved.
ImageU8 resize_bilinear(const ImageU8& img, int out_h, int out_w);

/// RGB image to model input: scale to [0, 1], then (v - mean) / std per
/// channel. Output shape is (h, w, 3).
nn::Tensor to_model_input(const ImageU8& img, const std::array<double, 3>& mean,
                          const std::array<double, 3>& stddev);

/// Resize to the backbone's preferred square input and normalize with its
/// declared statistics.
nn::Tensor preprocess_for(const ImageU8& img, const nn::Backbone& backbone);

}  // namespace apsense::imagery
