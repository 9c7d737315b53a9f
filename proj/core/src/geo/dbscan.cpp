#include "apsense/geo/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

#include "apsense/common/error.hpp"

namespace apsense::geo {

namespace {

struct CellKey {
  std::int64_t x;
  std::int64_t y;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(k.y) + 0x9E3779B97F4A7C15ull + (h << 6) +
         (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// Uniform grid with cell size epsilon; neighbors of a point are contained
// in its 3x3 cell block.
class GridIndex {
 public:
  GridIndex(const std::vector<AccidentRecord>& pts, double eps)
      : pts_(pts), eps_(eps) {
    cells_.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cells_[key(pts[i])].push_back(i);
    }
  }

  // Indices within eps of pts_[center], ascending, center included.
  void query(std::size_t center, std::vector<std::size_t>& out) const {
    out.clear();
    const AccidentRecord& p = pts_[center];
    const CellKey k0 = key(p);
    const double eps2 = eps_ * eps_;
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        auto it = cells_.find(CellKey{k0.x + dx, k0.y + dy});
        if (it == cells_.end()) continue;
        for (std::size_t j : it->second) {
          const double a = pts_[j].lat - p.lat;
          const double b = pts_[j].lon - p.lon;
          if (a * a + b * b <= eps2) out.push_back(j);
        }
      }
    }
    // Cell iteration order is arbitrary; sort so expansion order depends
    // only on record order.
    std::sort(out.begin(), out.end());
  }

 private:
  CellKey key(const AccidentRecord& p) const {
    return CellKey{static_cast<std::int64_t>(std::floor(p.lon / eps_)),
                   static_cast<std::int64_t>(std::floor(p.lat / eps_))};
  }

  const std::vector<AccidentRecord>& pts_;
  double eps_;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> cells_;
};

}  // namespace

ClusterLabeling dbscan(const std::vector<AccidentRecord>& records,
                       const DbscanParams& params) {
  if (!(params.epsilon > 0.0)) fail_input("dbscan: epsilon must be > 0");
  if (params.min_points < 1) fail_input("dbscan: min_points must be >= 1");
  for (const auto& r : records) {
    if (!std::isfinite(r.lat) || !std::isfinite(r.lon)) {
      fail_input("dbscan: non-finite coordinate");
    }
  }

  const std::size_t n = records.size();
  ClusterLabeling result;
  result.labels.assign(n, kNoise);
  if (n == 0) return result;

  GridIndex index(records, params.epsilon);
  const std::size_t min_pts = static_cast<std::size_t>(params.min_points);

  std::vector<bool> visited(n, false);
  std::vector<std::size_t> neighbors;
  std::vector<std::size_t> expansion;
  int next_cluster = 0;

  for (std::size_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    visited[i] = true;

    index.query(i, neighbors);
    if (neighbors.size() < min_pts) continue;  // stays noise unless reached

    const int cluster = next_cluster++;
    result.labels[i] = cluster;

    std::deque<std::size_t> seeds(neighbors.begin(), neighbors.end());
    while (!seeds.empty()) {
      const std::size_t q = seeds.front();
      seeds.pop_front();
      if (result.labels[q] == kNoise) result.labels[q] = cluster;
      if (visited[q]) continue;
      visited[q] = true;
      index.query(q, expansion);
      if (expansion.size() >= min_pts) {
        seeds.insert(seeds.end(), expansion.begin(), expansion.end());
      }
    }
  }

  result.cluster_count = next_cluster;
  return result;
}

}  // namespace apsense::geo
