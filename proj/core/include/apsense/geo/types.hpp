#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace apsense::geo {

/// One collision record. Only the event location is kept; severity and the
/// rest of the source metadata are dropped at ingest.
struct AccidentRecord {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

constexpr int kNoise = -1;

/// Per-record cluster assignment. Ids are dense, starting at 0, in order of
/// cluster discovery; kNoise marks records outside every cluster.
struct ClusterLabeling {
  std::vector<int> labels;
  int cluster_count = 0;
};

struct Hotspot {
  int id = 0;
  double lat = 0.0;  // centroid = mean of member coordinates
  double lon = 0.0;
  int member_count = 0;
};

struct DbscanParams {
  double epsilon = 0.0003;  // degrees, Euclidean in raw degree space
  int min_points = 50;      // neighborhood count including the point itself
};

/// Sorted k-th nearest neighbor distances plus the knee suggestion.
/// The knee is the index of maximum discrete second difference; it is left
/// unset when the curve carries no curvature signal (e.g. constant).
struct KDistanceCurve {
  int k = 0;
  std::vector<double> distances;  // ascending
  std::optional<std::size_t> knee_index;
};

}  // namespace apsense::geo
