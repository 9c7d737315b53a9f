#pragma once

#include <optional>
#include <vector>

#include "apsense/apf/imageproc.hpp"
#include "apsense/imagery/image.hpp"

namespace apsense::metrics {

inline constexpr int kSaliencyThreshold = 100;  // on the 0..255 scale

/// Percent of the explanation mask covered by foreground pixels:
/// 100 * |mask| / raster size.
double area_fraction_percent(const apf::Mask& mask);

/// Percent of the salient pixels (gray value >= threshold) that fall
/// inside the contour mask: 100 * |S intersect C| / |S|. Returns
/// nullopt when the image has no salient pixel, so the caller can skip
/// it in the average.
std::optional<double> visual_saliency_percent(const imagery::ImageU8& saliency,
                                              const apf::Mask& contour_mask,
                                              int threshold = kSaliencyThreshold);

struct SaliencyAggregate {
  double mean = 0.0;
  int used = 0;
  int skipped = 0;
};

/// Mean of the per-image percentages, skipping absent values.
/// Errors if every image was skipped.
SaliencyAggregate aggregate_visual_saliency(
    const std::vector<std::optional<double>>& per_image);

}  // namespace apsense::metrics
