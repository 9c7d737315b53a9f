#pragma once

#include "apsense/geo/types.hpp"

namespace apsense::geo {

/// Sorted k-th nearest neighbor distance per record (self excluded),
/// Euclidean in degree space. Requires k >= 1 and k < records.size().
///
/// The knee suggestion is the interior index maximizing the discrete second
/// difference d[i+1] - 2 d[i] + d[i-1]; it is a suggestion for picking the
/// clustering epsilon and is never applied automatically. Curves with no
/// strictly positive second difference (e.g. constant) leave it unset.
KDistanceCurve k_distance_curve(const std::vector<AccidentRecord>& records,
                                int k);

}  // namespace apsense::geo
