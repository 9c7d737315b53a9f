#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "apsense/imagery/image.hpp"
#include "apsense/nn/classifier.hpp"

namespace apsense::cam {

enum class Method { gradcam, gradcampp, scorecam };

Method method_from_string(const std::string& s);
std::string to_string(Method m);

/// Class-activation heatmap, min-max normalized to [0,1] (an all-zero
/// map stays all-zero) and bilinearly upsampled to (h, w).
struct Heatmap {
  int h = 0;
  int w = 0;
  std::vector<double> v;  // row-major
  Method method = Method::gradcam;
  nn::CamTarget target = nn::CamTarget::backbone_last_conv;
  int target_class = nn::kClassHotspot;

  double at(int y, int x) const { return v[static_cast<std::size_t>(y) * w + x]; }
};

/// Computes the heatmap for `target_class` at the requested activation
/// target, upsampled to (out_h, out_w).
///
/// gradcam weighs channels by spatially averaged logit gradients;
/// gradcampp refines the weights with second-order coefficients
/// (normalized per channel, so uniform gradients degenerate to
/// gradcam); scorecam is gradient-free and weighs channels by the
/// softmax score gain of the channel-masked input over a zero-input
/// baseline.
Heatmap compute_cam(nn::AbmClassifier& model, const nn::Tensor& input,
                    Method method, int target_class, nn::CamTarget target,
                    int out_h, int out_w);

/// Grayscale raster of the heatmap (values scaled to 0..255).
imagery::ImageU8 heatmap_to_gray(const Heatmap& heatmap);

/// PNG plus a JSON sidecar describing method, target and class.
void write_heatmap(const std::filesystem::path& png_path, const Heatmap& heatmap);

}  // namespace apsense::cam
