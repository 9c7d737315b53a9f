#include "apsense/apf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"
#include "apsense/imagery/codec.hpp"

namespace apsense::apf {
namespace {

void draw_line(imagery::ImageU8& img, int x0, int y0, int x1, int y1,
               std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (y0 >= 0 && y0 < img.h && x0 >= 0 && x0 < img.w) {
      img.at(y0, x0, 0) = r;
      if (img.c == 3) {
        img.at(y0, x0, 1) = g;
        img.at(y0, x0, 2) = b;
      }
    }
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

BandRule BandRule::for_height(int h) {
  if (h < 1) fail_input("band rule needs a positive raster height");
  BandRule rule;
  rule.upper_rows = static_cast<int>(std::lround(h * 300.0 / 640.0));
  rule.lower_start = static_cast<int>(std::lround(h * 360.0 / 640.0));
  return rule;
}

Mask binarize(const std::vector<double>& heat, int h, int w, double tau) {
  if (static_cast<std::size_t>(h) * w != heat.size())
    fail_input("heatmap size does not match the stated raster shape");
  Mask m(h, w);
  for (std::size_t i = 0; i < heat.size(); ++i) m.v[i] = heat[i] >= tau ? 1 : 0;
  return m;
}

Mask binarize(const cam::Heatmap& heat, double tau) {
  return binarize(heat.v, heat.h, heat.w, tau);
}

Mask band_filter(const Mask& mask, const BandRule& rule) {
  if (rule.lower_start < 0 || rule.lower_start > mask.h)
    fail_input("band rule does not fit the raster height");
  std::vector<int> labels;
  const int n = label_components(mask, labels);
  if (n == 0) return mask;

  std::vector<std::uint8_t> keep(static_cast<std::size_t>(n), 0);
  for (int y = rule.lower_start; y < mask.h; ++y)
    for (int x = 0; x < mask.w; ++x) {
      const int lab = labels[static_cast<std::size_t>(y) * mask.w + x];
      if (lab >= 0) keep[static_cast<std::size_t>(lab)] = 1;
    }

  Mask out(mask.h, mask.w);
  for (std::size_t i = 0; i < mask.v.size(); ++i)
    out.v[i] = (labels[i] >= 0 && keep[static_cast<std::size_t>(labels[i])]) ? 1 : 0;
  return out;
}

ContourSet extract_contours(const Mask& mask) {
  ContourSet cs;
  cs.mask = mask;
  const std::size_t on = mask.count();
  cs.area_fraction_percent =
      100.0 * static_cast<double>(on) / static_cast<double>(mask.v.size());
  if (on == 0) return cs;

  const std::vector<double> dist = distance_transform(mask);
  const double peak = *std::max_element(dist.begin(), dist.end());
  std::vector<Peak> seeds =
      merge_peaks(local_maxima(dist, mask, kPeakFraction * peak),
                  kPeakMergeRadius);
  if (seeds.empty()) return cs;

  const std::vector<int> regions = watershed(dist, mask, seeds);
  std::set<int> labels_seen;
  for (int lab : regions)
    if (lab > 0) labels_seen.insert(lab);

  for (int lab : labels_seen) {
    auto ring = trace_boundary(regions, mask.h, mask.w, lab);
    if (ring.empty()) continue;
    cs.contours.push_back(simplify_ring(ring, kSimplifyTolerance));
  }
  return cs;
}

ContourSet run_pipeline(const cam::Heatmap& heat, double tau,
                        const BandRule& rule) {
  return extract_contours(band_filter(binarize(heat, tau), rule));
}

imagery::ImageU8 render_overlay(const imagery::ImageU8& base,
                                const ContourSet& contours) {
  if (base.h != contours.mask.h || base.w != contours.mask.w)
    fail_input("overlay base image does not match the contour raster");
  imagery::ImageU8 out = base;
  for (const auto& ring : contours.contours) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const auto& a = ring[i];
      const auto& b = ring[(i + 1) % ring.size()];
      draw_line(out, static_cast<int>(std::lround(a[0])),
                static_cast<int>(std::lround(a[1])),
                static_cast<int>(std::lround(b[0])),
                static_cast<int>(std::lround(b[1])), 255, 0, 0);
    }
  }
  return out;
}

imagery::ImageU8 mask_to_gray(const Mask& mask) {
  imagery::ImageU8 img(mask.h, mask.w, 1);
  for (std::size_t i = 0; i < mask.v.size(); ++i)
    img.v[i] = mask.v[i] ? 255 : 0;
  return img;
}

void write_mask_png(const std::filesystem::path& path, const Mask& mask) {
  imagery::write_png(path, mask_to_gray(mask));
}

void write_contours_json(const std::filesystem::path& path,
                         const ContourSet& contours) {
  nlohmann::json j;
  j["height"] = contours.mask.h;
  j["width"] = contours.mask.w;
  j["area_fraction_percent"] = contours.area_fraction_percent;
  nlohmann::json rings = nlohmann::json::array();
  for (const auto& ring : contours.contours) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& p : ring) r.push_back({p[0], p[1]});
    rings.push_back(std::move(r));
  }
  j["contours"] = std::move(rings);
  apsense::fs::atomic_write(path, j.dump(2) + "\n");
}

}  // namespace apsense::apf
