#pragma once

#include <string>
#include <vector>

#include "apsense/apf/imageproc.hpp"
#include "apsense/imagery/image.hpp"

namespace apsense::metrics {

/// How the explanation region is removed before re-scoring:
///   black_patch      - zero out the contour mask
///   explain_only     - zero out everything except the contour mask
///   inverse_cam      - zero out the lowest-activation region of the
///                      same pixel count as the contour mask
///   road_imputation  - replace the top-T% heatmap pixels with values
///                      diffused in from their unmasked neighbors
enum class MaskStrategyKind {
  black_patch,
  explain_only,
  inverse_cam,
  road_imputation,
};

MaskStrategyKind mask_strategy_from_string(const std::string& s);
std::string to_string(MaskStrategyKind k);

struct MaskStrategy {
  MaskStrategyKind kind = MaskStrategyKind::black_patch;
  double threshold_percent = 0.0;  // road_imputation only
};

/// The T% highest-valued heatmap pixels (count rounded to nearest);
/// ties are broken by raster order.
apf::Mask top_percent_mask(const std::vector<double>& heat, int h, int w,
                           double percent);

/// The `count` lowest-valued heatmap pixels, ties by raster order.
apf::Mask bottom_count_mask(const std::vector<double>& heat, int h, int w,
                            std::size_t count);

/// Fills masked entries of a scalar plane with the harmonic extension
/// of the unmasked values: each filled pixel equals the mean of its
/// in-image 4-neighbors. Exact sparse solve; masking every pixel is an
/// error. Filled values always lie within the range of the boundary
/// values they diffuse from.
std::vector<double> impute_plane(const std::vector<double>& plane, int h, int w,
                                 const apf::Mask& mask);

/// Per-channel impute_plane on an 8-bit image, rounded back to bytes.
imagery::ImageU8 road_impute(const imagery::ImageU8& img, const apf::Mask& mask);

/// Applies a strategy. `heat` (row-major, image-sized) is required by
/// inverse_cam and road_imputation; `region` (the explanation mask) by
/// black_patch, explain_only and inverse_cam.
imagery::ImageU8 apply_mask_strategy(const imagery::ImageU8& img,
                                     const std::vector<double>* heat,
                                     const apf::Mask* region,
                                     const MaskStrategy& strategy);

}  // namespace apsense::metrics
