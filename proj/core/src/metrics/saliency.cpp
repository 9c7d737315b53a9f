#include "apsense/metrics/saliency.hpp"

#include "apsense/common/error.hpp"

namespace apsense::metrics {

double area_fraction_percent(const apf::Mask& mask) {
  if (mask.v.empty()) fail_input("area fraction of an empty raster");
  return 100.0 * static_cast<double>(mask.count()) /
         static_cast<double>(mask.v.size());
}

std::optional<double> visual_saliency_percent(const imagery::ImageU8& saliency,
                                              const apf::Mask& contour_mask,
                                              int threshold) {
  if (saliency.c != 1)
    fail_input("saliency raster must be single channel");
  if (saliency.h != contour_mask.h || saliency.w != contour_mask.w)
    fail_input("saliency raster does not match the contour mask");

  std::size_t salient = 0, covered = 0;
  for (std::size_t i = 0; i < saliency.v.size(); ++i) {
    if (saliency.v[i] >= threshold) {
      ++salient;
      if (contour_mask.v[i]) ++covered;
    }
  }
  if (salient == 0) return std::nullopt;
  return 100.0 * static_cast<double>(covered) / static_cast<double>(salient);
}

SaliencyAggregate aggregate_visual_saliency(
    const std::vector<std::optional<double>>& per_image) {
  if (per_image.empty()) fail_input("no saliency values to aggregate");
  SaliencyAggregate agg;
  double sum = 0.0;
  for (const auto& v : per_image) {
    if (v) {
      sum += *v;
      ++agg.used;
    } else {
      ++agg.skipped;
    }
  }
  if (agg.used == 0)
    fail_numeric("every image was skipped: no salient pixels anywhere");
  agg.mean = sum / agg.used;
  return agg;
}

}  // namespace apsense::metrics
