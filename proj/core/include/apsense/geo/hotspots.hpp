#pragma once

#include "apsense/geo/types.hpp"

namespace apsense::geo {

/// Great-circle distance in meters (haversine, spherical earth R = 6371 km).
double haversine_m(double lat1, double lon1, double lat2, double lon2);

/// One hotspot per non-noise label; centroid is the arithmetic mean of the
/// member coordinates. Ordered by cluster id.
std::vector<Hotspot> hotspots_from_labeling(
    const std::vector<AccidentRecord>& records,
    const ClusterLabeling& labeling);

/// Hotspots whose centroid lies within radius_m (inclusive) of `position`,
/// haversine meters. Preserves input order.
std::vector<Hotspot> within_range(const AccidentRecord& position,
                                  const std::vector<Hotspot>& hotspots,
                                  double radius_m = 200.0);

}  // namespace apsense::geo
