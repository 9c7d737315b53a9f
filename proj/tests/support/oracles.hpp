#pragma once

// Independent re-implementations used as test oracles. Everything here
// is deliberately written the slow, obvious way and shares no code with
// the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "apsense/geo/types.hpp"
#include "apsense/nn/tensor.hpp"

namespace testsupport {

struct BruteDbscan {
  std::vector<int> labels;
  int cluster_count = 0;
  std::vector<bool> core;
  // Valid cluster ids a border point may carry (clusters of its core
  // neighbors); empty for noise and core points.
  std::vector<std::vector<int>> border_choices;
};

/// Textbook density-reachability closure. Core points are connected
/// through core-core epsilon edges; each connected core set is one
/// cluster, numbered by its first core point in input order (the same
/// discovery order the library uses). Border points may validly join
/// any cluster owning a core within epsilon.
inline BruteDbscan brute_dbscan(const std::vector<apsense::geo::AccidentRecord>& pts,
                                double eps, int min_points) {
  const std::size_t n = pts.size();
  BruteDbscan out;
  out.labels.assign(n, apsense::geo::kNoise);
  out.core.assign(n, false);
  out.border_choices.assign(n, {});
  const double eps2 = eps * eps;

  std::vector<std::vector<std::size_t>> nbr(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = pts[i].lat - pts[j].lat;
      const double dy = pts[i].lon - pts[j].lon;
      if (dx * dx + dy * dy <= eps2) nbr[i].push_back(j);
    }
    out.core[i] = nbr[i].size() >= static_cast<std::size_t>(min_points);
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.core[i]) continue;
    for (std::size_t j : nbr[i]) {
      if (out.core[j]) parent[find(i)] = find(j);
    }
  }

  std::vector<int> root_cluster(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.core[i]) continue;
    const std::size_t r = find(i);
    if (root_cluster[r] < 0) root_cluster[r] = out.cluster_count++;
    out.labels[i] = root_cluster[r];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out.core[i]) continue;
    for (std::size_t j : nbr[i]) {
      if (out.core[j]) out.border_choices[i].push_back(out.labels[j]);
    }
  }
  return out;
}

/// Direct convolution with zero padding k/2, stride 1 (HWC tensors).
inline apsense::nn::Tensor naive_conv2d(const apsense::nn::Tensor& x,
                                        const std::vector<double>& weights,
                                        const std::vector<double>& bias,
                                        int out_channels, int k) {
  const int pad = k / 2;
  apsense::nn::Tensor y(x.h, x.w, out_channels);
  for (int oc = 0; oc < out_channels; ++oc) {
    for (int oy = 0; oy < x.h; ++oy) {
      for (int ox = 0; ox < x.w; ++ox) {
        double acc = bias[static_cast<std::size_t>(oc)];
        for (int ic = 0; ic < x.c; ++ic) {
          for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
              const int iy = oy + ky - pad;
              const int ix = ox + kx - pad;
              if (iy < 0 || iy >= x.h || ix < 0 || ix >= x.w) continue;
              const std::size_t widx =
                  ((static_cast<std::size_t>(oc) * x.c + ic) * k + ky) * k + kx;
              acc += weights[widx] * x.at(iy, ix, ic);
            }
          }
        }
        y.at(oy, ox, oc) = acc;
      }
    }
  }
  return y;
}

/// Central finite difference of scalar(w) with respect to one entry.
template <typename F>
double central_diff(F&& scalar, double& entry, double step = 1e-6) {
  const double saved = entry;
  entry = saved + step;
  const double hi = scalar();
  entry = saved - step;
  const double lo = scalar();
  entry = saved;
  return (hi - lo) / (2.0 * step);
}

inline double rel_err(double got, double want) {
  const double denom = std::max({std::abs(got), std::abs(want), 1e-12});
  return std::abs(got - want) / denom;
}

/// Mixed absolute/relative tolerance for finite-difference checks:
/// near-zero gradients are compared absolutely, large ones relatively.
inline bool grad_close(double got, double want, double tol = 1e-5) {
  return std::abs(got - want) <=
         tol * std::max({1.0, std::abs(got), std::abs(want)});
}

/// Independent bilinear resampling with half-pixel centers.
inline std::vector<double> bilinear_oracle(const std::vector<double>& src, int sh,
                                           int sw, int dh, int dw) {
  std::vector<double> dst(static_cast<std::size_t>(dh) * dw);
  for (int y = 0; y < dh; ++y) {
    for (int x = 0; x < dw; ++x) {
      double fy = (y + 0.5) * sh / dh - 0.5;
      double fx = (x + 0.5) * sw / dw - 0.5;
      fy = std::min(std::max(fy, 0.0), sh - 1.0);
      fx = std::min(std::max(fx, 0.0), sw - 1.0);
      const int y0 = static_cast<int>(std::floor(fy));
      const int x0 = static_cast<int>(std::floor(fx));
      const int y1 = std::min(y0 + 1, sh - 1);
      const int x1 = std::min(x0 + 1, sw - 1);
      const double ay = fy - y0;
      const double ax = fx - x0;
      const auto at = [&](int yy, int xx) {
        return src[static_cast<std::size_t>(yy) * sw + xx];
      };
      dst[static_cast<std::size_t>(y) * dw + x] =
          at(y0, x0) * (1 - ay) * (1 - ax) + at(y0, x1) * (1 - ay) * ax +
          at(y1, x0) * ay * (1 - ax) + at(y1, x1) * ay * ax;
    }
  }
  return dst;
}

/// Brute-force exact Euclidean distance transform.
inline std::vector<double> brute_edt(const std::vector<std::uint8_t>& fg, int h,
                                     int w) {
  std::vector<double> out(static_cast<std::size_t>(h) * w, 0.0);
  const double cap = std::sqrt(static_cast<double>(h) * h + static_cast<double>(w) * w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!fg[static_cast<std::size_t>(y) * w + x]) continue;
      double best = cap * cap;
      for (int by = 0; by < h; ++by) {
        for (int bx = 0; bx < w; ++bx) {
          if (fg[static_cast<std::size_t>(by) * w + bx]) continue;
          const double d2 = double(by - y) * (by - y) + double(bx - x) * (bx - x);
          best = std::min(best, d2);
        }
      }
      out[static_cast<std::size_t>(y) * w + x] = std::min(std::sqrt(best), cap);
    }
  }
  return out;
}

}  // namespace testsupport
