#include "apsense/apf/imageproc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

#include "apsense/common/error.hpp"

namespace apsense::apf {
namespace {

constexpr int kDy8[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
constexpr int kDx8[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

// Large finite stand-in for infinity; keeps the parabola intersection
// arithmetic finite.
constexpr double kFar = 1e20;

// 1-D squared-distance transform (lower envelope of parabolas).
void dt1d(const std::vector<double>& f, std::vector<double>& d, int n,
          std::vector<int>& v, std::vector<double>& z) {
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  int k = 0;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * static_cast<double>(q)) -
                (f[v[k]] + v[k] * static_cast<double>(v[k]))) /
               (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * static_cast<double>(q)) -
           (f[v[k]] + v[k] * static_cast<double>(v[k]))) /
          (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - static_cast<double>(v[k]);
    d[q] = dq * dq + f[v[k]];
  }
}

double point_segment_distance(const std::array<double, 2>& p,
                              const std::array<double, 2>& a,
                              const std::array<double, 2>& b) {
  const double vx = b[0] - a[0], vy = b[1] - a[1];
  const double wx = p[0] - a[0], wy = p[1] - a[1];
  const double vv = vx * vx + vy * vy;
  double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = p[0] - (a[0] + t * vx);
  const double dy = p[1] - (a[1] + t * vy);
  return std::hypot(dx, dy);
}

void douglas_peucker(const std::vector<std::array<double, 2>>& pts, int lo,
                     int hi, double tol, std::vector<bool>& keep) {
  if (hi <= lo + 1) return;
  double worst = -1.0;
  int worst_i = -1;
  for (int i = lo + 1; i < hi; ++i) {
    const double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
    if (d > worst) {
      worst = d;
      worst_i = i;
    }
  }
  if (worst > tol) {
    keep[worst_i] = true;
    douglas_peucker(pts, lo, worst_i, tol, keep);
    douglas_peucker(pts, worst_i, hi, tol, keep);
  }
}

}  // namespace

std::size_t Mask::count() const {
  std::size_t n = 0;
  for (std::uint8_t x : v)
    if (x) ++n;
  return n;
}

int label_components(const Mask& mask, std::vector<int>& labels) {
  labels.assign(mask.v.size(), -1);
  int next = 0;
  std::deque<std::pair<int, int>> frontier;
  for (int y = 0; y < mask.h; ++y) {
    for (int x = 0; x < mask.w; ++x) {
      if (!mask.at(y, x) || labels[static_cast<std::size_t>(y) * mask.w + x] >= 0)
        continue;
      const int lab = next++;
      labels[static_cast<std::size_t>(y) * mask.w + x] = lab;
      frontier.emplace_back(y, x);
      while (!frontier.empty()) {
        const auto [cy, cx] = frontier.front();
        frontier.pop_front();
        for (int i = 0; i < 8; ++i) {
          const int ny = cy + kDy8[i];
          const int nx = cx + kDx8[i];
          if (ny < 0 || ny >= mask.h || nx < 0 || nx >= mask.w) continue;
          const std::size_t idx = static_cast<std::size_t>(ny) * mask.w + nx;
          if (mask.v[idx] && labels[idx] < 0) {
            labels[idx] = lab;
            frontier.emplace_back(ny, nx);
          }
        }
      }
    }
  }
  return next;
}

std::vector<double> distance_transform(const Mask& mask) {
  const int h = mask.h, w = mask.w;
  if (h < 1 || w < 1) fail_input("distance transform of an empty mask");
  std::vector<double> sq(mask.v.size());
  for (std::size_t i = 0; i < mask.v.size(); ++i)
    sq[i] = mask.v[i] ? kFar : 0.0;

  const int n = std::max(h, w);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = sq[static_cast<std::size_t>(y) * w + x];
    dt1d(f, d, h, v, z);
    for (int y = 0; y < h; ++y) sq[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = sq[static_cast<std::size_t>(y) * w + x];
    dt1d(f, d, w, v, z);
    for (int x = 0; x < w; ++x) sq[static_cast<std::size_t>(y) * w + x] = d[x];
  }

  const double cap = static_cast<double>(h) * h + static_cast<double>(w) * w;
  for (double& x : sq) x = std::sqrt(std::min(x, cap));
  return sq;
}

std::vector<Peak> local_maxima(const std::vector<double>& field,
                               const Mask& mask, double min_value) {
  if (field.size() != mask.v.size())
    fail_input("field and mask sizes differ in local_maxima");
  std::vector<Peak> out;
  for (int y = 0; y < mask.h; ++y) {
    for (int x = 0; x < mask.w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * mask.w + x;
      if (!mask.v[idx] || field[idx] < min_value) continue;
      bool is_max = true;
      for (int i = 0; i < 8 && is_max; ++i) {
        const int ny = y + kDy8[i];
        const int nx = x + kDx8[i];
        if (ny < 0 || ny >= mask.h || nx < 0 || nx >= mask.w) continue;
        if (field[static_cast<std::size_t>(ny) * mask.w + nx] > field[idx])
          is_max = false;
      }
      if (is_max) out.push_back({y, x, field[idx]});
    }
  }
  return out;
}

std::vector<Peak> merge_peaks(std::vector<Peak> peaks, double radius) {
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  std::vector<Peak> kept;
  const double r2 = radius * radius;
  for (const Peak& p : peaks) {
    bool blocked = false;
    for (const Peak& q : kept) {
      const double dy = p.y - q.y, dx = p.x - q.x;
      if (dy * dy + dx * dx <= r2) {
        blocked = true;
        break;
      }
    }
    if (!blocked) kept.push_back(p);
  }
  return kept;
}

std::vector<int> watershed(const std::vector<double>& field, const Mask& mask,
                           const std::vector<Peak>& seeds) {
  if (field.size() != mask.v.size())
    fail_input("field and mask sizes differ in watershed");
  std::vector<int> labels(mask.v.size(), 0);

  struct QEntry {
    double value;
    std::uint64_t age;
    int y, x, label;
    bool operator<(const QEntry& o) const {
      // Max-heap on value; older entries win ties.
      if (value != o.value) return value < o.value;
      return age > o.age;
    }
  };
  std::priority_queue<QEntry> pq;
  std::uint64_t age = 0;

  int next = 1;
  for (const Peak& s : seeds) {
    if (s.y < 0 || s.y >= mask.h || s.x < 0 || s.x >= mask.w)
      fail_input("watershed seed outside the raster");
    const std::size_t idx = static_cast<std::size_t>(s.y) * mask.w + s.x;
    if (!mask.v[idx]) fail_input("watershed seed on a background pixel");
    labels[idx] = next;
    pq.push({field[idx], age++, s.y, s.x, next});
    ++next;
  }

  std::vector<std::uint8_t> queued(mask.v.size(), 0);
  while (!pq.empty()) {
    const QEntry cur = pq.top();
    pq.pop();
    for (int i = 0; i < 8; ++i) {
      const int ny = cur.y + kDy8[i];
      const int nx = cur.x + kDx8[i];
      if (ny < 0 || ny >= mask.h || nx < 0 || nx >= mask.w) continue;
      const std::size_t idx = static_cast<std::size_t>(ny) * mask.w + nx;
      if (!mask.v[idx] || labels[idx] != 0 || queued[idx]) continue;
      labels[idx] = cur.label;
      queued[idx] = 1;
      pq.push({field[idx], age++, ny, nx, cur.label});
    }
  }
  return labels;
}

std::vector<std::array<double, 2>> trace_boundary(const std::vector<int>& labels,
                                                  int h, int w, int label) {
  auto inside = [&](int y, int x) {
    return y >= 0 && y < h && x >= 0 && x < w &&
           labels[static_cast<std::size_t>(y) * w + x] == label;
  };

  int sy = -1, sx = -1;
  for (int y = 0; y < h && sy < 0; ++y)
    for (int x = 0; x < w; ++x)
      if (inside(y, x)) {
        sy = y;
        sx = x;
        break;
      }
  if (sy < 0) return {};

  // Clockwise Moore neighborhood starting west.
  constexpr int my[8] = {0, -1, -1, -1, 0, 1, 1, 1};
  constexpr int mx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
  auto dir_index = [&](int dy, int dx) {
    for (int i = 0; i < 8; ++i)
      if (my[i] == dy && mx[i] == dx) return i;
    fail_input("boundary trace lost adjacency");
  };

  std::vector<std::array<double, 2>> ring;
  int cy = sy, cx = sx;
  int bdir = 0;  // direction of the background pixel we entered from (west)
  int first_move = -1;

  // Stop when the walk is back at the start pixel about to repeat its
  // first move: the traversal state recurs, so the boundary walk is
  // complete. Thin (one pixel wide) limbs are walked out and back.
  int guard = 8 * h * w + 8;
  while (guard-- > 0) {
    int found = -1;
    for (int i = 1; i <= 8; ++i) {
      const int d = (bdir + i) % 8;
      if (inside(cy + my[d], cx + mx[d])) {
        found = d;
        break;
      }
    }
    if (found < 0) {  // isolated pixel
      ring.push_back({static_cast<double>(cx), static_cast<double>(cy)});
      break;
    }
    if (cy == sy && cx == sx) {
      if (first_move < 0)
        first_move = found;
      else if (found == first_move)
        break;
    }
    ring.push_back({static_cast<double>(cx), static_cast<double>(cy)});

    // The probe just before `found` is the last background pixel; the
    // new backtrack direction points at it from the pixel we move to.
    const int prev = (found + 7) % 8;
    const int bg_y = cy + my[prev];
    const int bg_x = cx + mx[prev];
    cy += my[found];
    cx += mx[found];
    bdir = dir_index(bg_y - cy, bg_x - cx);
  }
  return ring;
}

std::vector<std::array<double, 2>> simplify_ring(
    const std::vector<std::array<double, 2>>& ring, double tolerance) {
  if (ring.size() <= 3) return ring;
  // Anchor the ring at its first vertex and at the vertex farthest
  // from it, then simplify the two open halves.
  std::size_t pivot = 1;
  double best = -1.0;
  for (std::size_t i = 1; i < ring.size(); ++i) {
    const double dx = ring[i][0] - ring[0][0];
    const double dy = ring[i][1] - ring[0][1];
    const double d = dx * dx + dy * dy;
    if (d > best) {
      best = d;
      pivot = i;
    }
  }
  std::vector<bool> keep(ring.size() + 1, false);
  std::vector<std::array<double, 2>> closed = ring;
  closed.push_back(ring[0]);
  keep[0] = keep[pivot] = keep[ring.size()] = true;
  douglas_peucker(closed, 0, static_cast<int>(pivot), tolerance, keep);
  douglas_peucker(closed, static_cast<int>(pivot),
                  static_cast<int>(ring.size()), tolerance, keep);

  std::vector<std::array<double, 2>> out;
  for (std::size_t i = 0; i < ring.size(); ++i)
    if (keep[i]) out.push_back(closed[i]);
  return out;
}

double polygon_area(const std::vector<std::array<double, 2>>& ring) {
  if (ring.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % ring.size()];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return std::abs(s) * 0.5;
}

double otsu_threshold(const std::vector<double>& values) {
  if (values.empty()) fail_input("otsu threshold of an empty raster");
  std::array<std::size_t, 256> hist{};
  for (double v : values) {
    const int bin = static_cast<int>(std::clamp(v, 0.0, 1.0) * 255.0);
    ++hist[static_cast<std::size_t>(bin)];
  }
  const double total = static_cast<double>(values.size());
  double sum_all = 0.0;
  for (int i = 0; i < 256; ++i) sum_all += i * static_cast<double>(hist[i]);

  double best_var = -1.0;
  int best_bin = 0;
  double w0 = 0.0, sum0 = 0.0;
  for (int t = 0; t < 256; ++t) {
    w0 += static_cast<double>(hist[t]);
    if (w0 == 0.0) continue;
    const double w1 = total - w0;
    if (w1 == 0.0) break;
    sum0 += t * static_cast<double>(hist[t]);
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best_var) {
      best_var = between;
      best_bin = t;
    }
  }
  return (best_bin + 1) / 255.0;
}

}  // namespace apsense::apf
