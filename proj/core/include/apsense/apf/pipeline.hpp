#pragma once

#include <filesystem>
#include <vector>

#include "apsense/apf/imageproc.hpp"
#include "apsense/cam/cam.hpp"
#include "apsense/imagery/image.hpp"

namespace apsense::apf {

/// Horizontal bands of a forward-facing road scene, in pixel rows.
/// Rows [0, upper_rows) look above the road, rows [lower_start, h)
/// cover the near road surface. Activations are only kept when their
/// connected blob reaches the near-road band.
struct BandRule {
  int upper_rows = 300;
  int lower_start = 360;

  /// Reference values are tuned for 640-row scenes; other heights
  /// scale proportionally.
  static BandRule for_height(int h);
};

inline constexpr double kDefaultTau = 0.5;
inline constexpr double kPeakFraction = 0.3;   // of the distance-transform max
inline constexpr double kPeakMergeRadius = 5.0;  // px
inline constexpr double kSimplifyTolerance = 2.0;  // px

/// Foreground where the heatmap is >= tau.
Mask binarize(const std::vector<double>& heat, int h, int w, double tau);
Mask binarize(const cam::Heatmap& heat, double tau);

/// Keeps an 8-connected component (whole) iff it has a pixel at or
/// below rule.lower_start; drops it otherwise. Idempotent.
Mask band_filter(const Mask& mask, const BandRule& rule);

struct ContourSet {
  Mask mask;  // the filtered mask the contours were derived from
  std::vector<std::vector<std::array<double, 2>>> contours;  // (x,y) rings
  double area_fraction_percent = 0.0;
};

/// Distance transform -> peak seeds (>= kPeakFraction of the max,
/// merged within kPeakMergeRadius) -> watershed -> traced boundaries,
/// simplified to kSimplifyTolerance.
ContourSet extract_contours(const Mask& mask);

/// Full chain: binarize at tau, band-filter, extract contours.
ContourSet run_pipeline(const cam::Heatmap& heat, double tau,
                        const BandRule& rule);

/// Contours drawn in red over a copy of the base image.
imagery::ImageU8 render_overlay(const imagery::ImageU8& base,
                                const ContourSet& contours);

imagery::ImageU8 mask_to_gray(const Mask& mask);
void write_mask_png(const std::filesystem::path& path, const Mask& mask);
void write_contours_json(const std::filesystem::path& path,
                         const ContourSet& contours);

}  // namespace apsense::apf
