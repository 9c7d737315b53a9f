#include "apsense/metrics/report.hpp"

#include "apsense/common/csv.hpp"
#include "apsense/common/fs.hpp"

namespace apsense::metrics {

void write_metric_csv(const std::filesystem::path& path,
                      const std::vector<MetricRow>& rows) {
  std::string out = "model,method,strategy,threshold,metric,value,images\n";
  for (const MetricRow& r : rows) {
    out += csv::join_row({
        r.model,
        r.method,
        r.strategy,
        r.threshold_percent ? csv::format_double(*r.threshold_percent) : "",
        r.metric,
        csv::format_double(r.value),
        std::to_string(r.images),
    });
    out += '\n';
  }
  apsense::fs::atomic_write(path, out);
}

}  // namespace apsense::metrics
