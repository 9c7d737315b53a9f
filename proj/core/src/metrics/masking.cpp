#include "apsense/metrics/masking.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "apsense/common/error.hpp"

namespace apsense::metrics {
namespace {

constexpr int kDy4[4] = {-1, 1, 0, 0};
constexpr int kDx4[4] = {0, 0, -1, 1};

std::vector<std::size_t> order_by_value(const std::vector<double>& heat,
                                        bool descending) {
  std::vector<std::size_t> idx(heat.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) {
                     return descending ? heat[a] > heat[b] : heat[a] < heat[b];
                   });
  return idx;
}

void check_shape(const std::vector<double>& heat, int h, int w) {
  if (static_cast<std::size_t>(h) * w != heat.size())
    fail_input("heatmap size does not match the stated raster shape");
}

}  // namespace

MaskStrategyKind mask_strategy_from_string(const std::string& s) {
  if (s == "black_patch") return MaskStrategyKind::black_patch;
  if (s == "explain_only") return MaskStrategyKind::explain_only;
  if (s == "inverse_cam") return MaskStrategyKind::inverse_cam;
  if (s == "road_imputation") return MaskStrategyKind::road_imputation;
  fail_config("unknown mask strategy '" + s + "'");
}

std::string to_string(MaskStrategyKind k) {
  switch (k) {
    case MaskStrategyKind::black_patch: return "black_patch";
    case MaskStrategyKind::explain_only: return "explain_only";
    case MaskStrategyKind::inverse_cam: return "inverse_cam";
    case MaskStrategyKind::road_imputation: return "road_imputation";
  }
  return "?";
}

apf::Mask top_percent_mask(const std::vector<double>& heat, int h, int w,
                           double percent) {
  check_shape(heat, h, w);
  if (percent < 0.0 || percent > 100.0)
    fail_input("mask percentage must be in [0, 100]");
  const auto count = static_cast<std::size_t>(
      std::lround(percent / 100.0 * static_cast<double>(heat.size())));
  const std::vector<std::size_t> idx = order_by_value(heat, true);
  apf::Mask mask(h, w);
  for (std::size_t i = 0; i < count; ++i) mask.v[idx[i]] = 1;
  return mask;
}

apf::Mask bottom_count_mask(const std::vector<double>& heat, int h, int w,
                            std::size_t count) {
  check_shape(heat, h, w);
  if (count > heat.size()) fail_input("mask pixel count exceeds the raster");
  const std::vector<std::size_t> idx = order_by_value(heat, false);
  apf::Mask mask(h, w);
  for (std::size_t i = 0; i < count; ++i) mask.v[idx[i]] = 1;
  return mask;
}

std::vector<double> impute_plane(const std::vector<double>& plane, int h, int w,
                                 const apf::Mask& mask) {
  check_shape(plane, h, w);
  if (mask.h != h || mask.w != w) fail_input("impute mask shape mismatch");

  std::vector<int> unknown_index(plane.size(), -1);
  int unknowns = 0;
  for (std::size_t i = 0; i < plane.size(); ++i)
    if (mask.v[i]) unknown_index[i] = unknowns++;
  if (unknowns == 0) return plane;
  if (static_cast<std::size_t>(unknowns) == plane.size())
    fail_input("cannot impute: every pixel is masked");

  // deg(i) * x_i - sum_{masked j ~ i} x_j = sum_{unmasked j ~ i} v_j
  // (the mean-of-neighbors equations scaled to a symmetric positive
  // definite system).
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(unknowns) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const int row = unknown_index[i];
      if (row < 0) continue;
      int degree = 0;
      for (int k = 0; k < 4; ++k) {
        const int ny = y + kDy4[k];
        const int nx = x + kDx4[k];
        if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
        ++degree;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (unknown_index[j] >= 0)
          trips.emplace_back(row, unknown_index[j], -1.0);
        else
          rhs[row] += plane[j];
      }
      trips.emplace_back(row, row, static_cast<double>(degree));
    }
  }

  Eigen::SparseMatrix<double> a(unknowns, unknowns);
  a.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success)
    fail_numeric("imputation system factorization failed");
  const Eigen::VectorXd x = solver.solve(rhs);
  if (solver.info() != Eigen::Success)
    fail_numeric("imputation system solve failed");

  std::vector<double> out = plane;
  for (std::size_t i = 0; i < plane.size(); ++i)
    if (unknown_index[i] >= 0) out[i] = x[unknown_index[i]];
  return out;
}

imagery::ImageU8 road_impute(const imagery::ImageU8& img, const apf::Mask& mask) {
  if (img.h != mask.h || img.w != mask.w)
    fail_input("impute mask does not match the image");
  imagery::ImageU8 out = img;
  const std::size_t pixels = static_cast<std::size_t>(img.h) * img.w;
  std::vector<double> plane(pixels);
  for (int ch = 0; ch < img.c; ++ch) {
    for (std::size_t i = 0; i < pixels; ++i)
      plane[i] = static_cast<double>(img.v[i * img.c + ch]);
    const std::vector<double> filled = impute_plane(plane, img.h, img.w, mask);
    for (std::size_t i = 0; i < pixels; ++i)
      out.v[i * img.c + ch] = static_cast<std::uint8_t>(
          std::lround(std::clamp(filled[i], 0.0, 255.0)));
  }
  return out;
}

imagery::ImageU8 apply_mask_strategy(const imagery::ImageU8& img,
                                     const std::vector<double>* heat,
                                     const apf::Mask* region,
                                     const MaskStrategy& strategy) {
  auto need_region = [&]() -> const apf::Mask& {
    if (!region) fail_input("mask strategy needs the explanation region");
    if (region->h != img.h || region->w != img.w)
      fail_input("explanation region does not match the image");
    return *region;
  };
  auto need_heat = [&]() -> const std::vector<double>& {
    if (!heat) fail_input("mask strategy needs the heatmap");
    check_shape(*heat, img.h, img.w);
    return *heat;
  };

  imagery::ImageU8 out = img;
  switch (strategy.kind) {
    case MaskStrategyKind::black_patch: {
      const apf::Mask& m = need_region();
      for (std::size_t i = 0; i < m.v.size(); ++i)
        if (m.v[i])
          for (int ch = 0; ch < img.c; ++ch) out.v[i * img.c + ch] = 0;
      return out;
    }
    case MaskStrategyKind::explain_only: {
      const apf::Mask& m = need_region();
      for (std::size_t i = 0; i < m.v.size(); ++i)
        if (!m.v[i])
          for (int ch = 0; ch < img.c; ++ch) out.v[i * img.c + ch] = 0;
      return out;
    }
    case MaskStrategyKind::inverse_cam: {
      const apf::Mask inv =
          bottom_count_mask(need_heat(), img.h, img.w, need_region().count());
      for (std::size_t i = 0; i < inv.v.size(); ++i)
        if (inv.v[i])
          for (int ch = 0; ch < img.c; ++ch) out.v[i * img.c + ch] = 0;
      return out;
    }
    case MaskStrategyKind::road_imputation: {
      const apf::Mask top = top_percent_mask(need_heat(), img.h, img.w,
                                             strategy.threshold_percent);
      return road_impute(img, top);
    }
  }
  fail_input("unhandled mask strategy");
}

}  // namespace apsense::metrics
