#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace apsense::metrics {

/// One aggregated metric value for the report CSV.
struct MetricRow {
  std::string model;     // e.g. "tiny3+abm-c"
  std::string method;    // explanation method, or "-" when not applicable
  std::string strategy;  // mask strategy / metric family, or "-"
  std::optional<double> threshold_percent;
  std::string metric;    // metric name
  double value = 0.0;
  int images = 0;
};

/// Writes "model,method,strategy,threshold,metric,value,images" with
/// round-trip double formatting (byte-stable across reruns).
void write_metric_csv(const std::filesystem::path& path,
                      const std::vector<MetricRow>& rows);

}  // namespace apsense::metrics
