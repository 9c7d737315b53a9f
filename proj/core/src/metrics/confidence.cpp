#include "apsense/metrics/confidence.hpp"

#include "apsense/common/error.hpp"

namespace apsense::metrics {
namespace {

double require_o(const ConfidenceRecord& r) {
  if (!r.o) fail_input("confidence record is missing the masked-image value");
  return *r.o;
}

double require_e(const ConfidenceRecord& r) {
  if (!r.e)
    fail_input("confidence record is missing the explanation-only value");
  return *r.e;
}

void require_nonempty(const std::vector<ConfidenceRecord>& records) {
  if (records.empty()) fail_input("no confidence records to aggregate");
}

}  // namespace

MeanStat confidence_change_percent(const std::vector<ConfidenceRecord>& records) {
  require_nonempty(records);
  MeanStat stat;
  double sum = 0.0;
  for (const ConfidenceRecord& r : records) {
    const double o = require_o(r);
    if (r.y == 0.0) {
      ++stat.skipped;
      continue;
    }
    sum += (r.y - o) / r.y * 100.0;
    ++stat.used;
  }
  if (stat.used == 0)
    fail_numeric("every record had zero original confidence");
  stat.value = sum / stat.used;
  return stat;
}

double cam_confidence_change(const std::vector<ConfidenceRecord>& records) {
  require_nonempty(records);
  double sum = 0.0;
  for (const ConfidenceRecord& r : records) sum += (require_e(r) - r.y) * 100.0;
  return sum / static_cast<double>(records.size());
}

int increase_in_confidence(const std::vector<ConfidenceRecord>& records) {
  require_nonempty(records);
  int count = 0;
  for (const ConfidenceRecord& r : records)
    if (require_e(r) > r.y) ++count;
  return count;
}

double average_confidence_change(const std::vector<ConfidenceRecord>& records) {
  require_nonempty(records);
  double sum = 0.0;
  for (const ConfidenceRecord& r : records) sum += require_o(r) - r.y;
  return sum / static_cast<double>(records.size());
}

}  // namespace apsense::metrics
