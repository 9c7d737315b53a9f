#pragma once

#include "apsense/geo/types.hpp"

namespace apsense::geo {

/// Density-based clustering over raw (lat, lon) degrees with Euclidean
/// distance. A record is a core point iff at least `min_points` records
/// (itself included) lie within `epsilon`. Clusters are maximal
/// density-connected sets; everything else is labeled kNoise.
///
/// Deterministic for a fixed record order: seeds are expanded in input
/// order and border points join the first cluster that reaches them.
/// Duplicate coordinates are legal and each one counts toward density.
ClusterLabeling dbscan(const std::vector<AccidentRecord>& records,
                       const DbscanParams& params);

}  // namespace apsense::geo
