#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace apsense::apf {

/// Binary raster; nonzero = foreground. Row-major storage.
struct Mask {
  int h = 0;
  int w = 0;
  std::vector<std::uint8_t> v;

  Mask() = default;
  Mask(int h_, int w_) : h(h_), w(w_), v(static_cast<std::size_t>(h_) * w_, 0) {}

  std::uint8_t& at(int y, int x) { return v[static_cast<std::size_t>(y) * w + x]; }
  std::uint8_t at(int y, int x) const {
    return v[static_cast<std::size_t>(y) * w + x];
  }

  std::size_t count() const;
};

/// 8-connected component labeling. Background pixels get -1;
/// components are numbered 0.. in raster order of their first pixel.
/// Returns the component count.
int label_components(const Mask& mask, std::vector<int>& labels);

/// Exact Euclidean distance from each foreground pixel to the nearest
/// background pixel (two-pass lower-envelope transform of the squared
/// distance). Background pixels get 0. A mask with no background at
/// all saturates at the image diagonal.
std::vector<double> distance_transform(const Mask& mask);

struct Peak {
  int y = 0;
  int x = 0;
  double value = 0.0;
};

/// Non-strict local maxima of `field` over the 8-neighborhood,
/// restricted to foreground pixels with field >= min_value.
std::vector<Peak> local_maxima(const std::vector<double>& field,
                               const Mask& mask, double min_value);

/// Greedy non-maximum suppression: peaks are taken in order of
/// decreasing value (ties by raster position) and any peak within
/// `radius` (Euclidean) of an accepted one is dropped.
std::vector<Peak> merge_peaks(std::vector<Peak> peaks, double radius);

/// Seeded priority-flood watershed. Seeds are numbered 1..n in input
/// order; flooding is restricted to foreground pixels, proceeds from
/// the highest `field` values downward with 8-connectivity, and breaks
/// ties by queue entry order. Returns a label raster (0 outside).
std::vector<int> watershed(const std::vector<double>& field, const Mask& mask,
                           const std::vector<Peak>& seeds);

/// Closed boundary of one labeled region (Moore neighbor tracing,
/// clockwise). Points are pixel centers as (x, y).
std::vector<std::array<double, 2>> trace_boundary(const std::vector<int>& labels,
                                                  int h, int w, int label);

/// Ramer-Douglas-Peucker simplification of a closed ring; every
/// original vertex stays within `tolerance` of the simplified chain.
std::vector<std::array<double, 2>> simplify_ring(
    const std::vector<std::array<double, 2>>& ring, double tolerance);

/// Shoelace area of a closed ring (absolute value).
double polygon_area(const std::vector<std::array<double, 2>>& ring);

/// Otsu threshold over a 256-bin histogram of values in [0, 1].
double otsu_threshold(const std::vector<double>& values);

}  // namespace apsense::apf
