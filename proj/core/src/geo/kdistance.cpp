#include "apsense/geo/kdistance.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "apsense/common/error.hpp"

namespace apsense::geo {

KDistanceCurve k_distance_curve(const std::vector<AccidentRecord>& records,
                                int k) {
  const std::size_t n = records.size();
  if (k < 1) fail_input("k_distance_curve: k must be >= 1");
  if (static_cast<std::size_t>(k) >= n) {
    fail_input("k_distance_curve: k must be < number of records");
  }
  for (const auto& r : records) {
    if (!std::isfinite(r.lat) || !std::isfinite(r.lon)) {
      fail_input("k_distance_curve: non-finite coordinate");
    }
  }

  KDistanceCurve curve;
  curve.k = k;
  curve.distances.reserve(n);

  // Max-heap of the k smallest squared distances per point.
  std::vector<double> heap;
  for (std::size_t i = 0; i < n; ++i) {
    heap.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double a = records[j].lat - records[i].lat;
      const double b = records[j].lon - records[i].lon;
      const double d2 = a * a + b * b;
      if (heap.size() < static_cast<std::size_t>(k)) {
        heap.push_back(d2);
        std::push_heap(heap.begin(), heap.end());
      } else if (d2 < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = d2;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    curve.distances.push_back(std::sqrt(heap.front()));
  }

  std::sort(curve.distances.begin(), curve.distances.end());

  double best = 0.0;
  for (std::size_t i = 1; i + 1 < curve.distances.size(); ++i) {
    const double second_diff = curve.distances[i + 1] -
                               2.0 * curve.distances[i] +
                               curve.distances[i - 1];
    if (second_diff > best) {
      best = second_diff;
      curve.knee_index = i;
    }
  }
  return curve;
}

}  // namespace apsense::geo
