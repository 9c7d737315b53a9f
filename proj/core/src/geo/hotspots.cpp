#include "apsense/geo/hotspots.hpp"

#include <cmath>

#include "apsense/common/error.hpp"

namespace apsense::geo {

namespace {
constexpr double kEarthRadiusM = 6371000.0;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}  // namespace

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlambda = (lon2 - lon1) * kDegToRad;
  const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2) *
                       std::sin(dlambda / 2);
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

std::vector<Hotspot> hotspots_from_labeling(
    const std::vector<AccidentRecord>& records,
    const ClusterLabeling& labeling) {
  if (labeling.labels.size() != records.size()) {
    fail_input("hotspots_from_labeling: labeling does not cover all records");
  }
  std::vector<Hotspot> hotspots(
      static_cast<std::size_t>(labeling.cluster_count));
  for (int id = 0; id < labeling.cluster_count; ++id) {
    hotspots[static_cast<std::size_t>(id)].id = id;
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const int label = labeling.labels[i];
    if (label == kNoise) continue;
    if (label < 0 || label >= labeling.cluster_count) {
      fail_input("hotspots_from_labeling: label out of range");
    }
    Hotspot& h = hotspots[static_cast<std::size_t>(label)];
    h.lat += records[i].lat;
    h.lon += records[i].lon;
    h.member_count += 1;
  }
  for (Hotspot& h : hotspots) {
    if (h.member_count > 0) {
      h.lat /= h.member_count;
      h.lon /= h.member_count;
    }
  }
  return hotspots;
}

std::vector<Hotspot> within_range(const AccidentRecord& position,
                                  const std::vector<Hotspot>& hotspots,
                                  double radius_m) {
  if (!(radius_m > 0.0)) fail_input("within_range: radius must be > 0");
  std::vector<Hotspot> hits;
  for (const Hotspot& h : hotspots) {
    if (haversine_m(position.lat, position.lon, h.lat, h.lon) <= radius_m) {
      hits.push_back(h);
    }
  }
  return hits;
}

}  // namespace apsense::geo
