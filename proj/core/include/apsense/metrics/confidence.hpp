#pragma once

#include <optional>
#include <vector>

namespace apsense::metrics {

/// Per-image classifier confidences for the target class:
///   y = on the original image
///   o = after a masking strategy removed the explanation region
///   e = on the explanation-only image (everything else removed)
/// Only the fields a given aggregate needs must be set.
struct ConfidenceRecord {
  double y = 0.0;
  std::optional<double> o;
  std::optional<double> e;
};

struct MeanStat {
  double value = 0.0;
  int used = 0;
  int skipped = 0;  // records excluded because y was zero
};

/// Mean over images of (y - o) / y * 100. Images with y == 0 are
/// skipped (and counted); it is an error if nothing remains.
MeanStat confidence_change_percent(const std::vector<ConfidenceRecord>& records);

/// Mean over images of (e - y) * 100.
double cam_confidence_change(const std::vector<ConfidenceRecord>& records);

/// Number of images where e > y.
int increase_in_confidence(const std::vector<ConfidenceRecord>& records);

/// Mean over images of (o - y), unscaled.
double average_confidence_change(const std::vector<ConfidenceRecord>& records);

}  // namespace apsense::metrics
