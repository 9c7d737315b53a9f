#include "apsense/imagery/plan.hpp"

#include <cmath>

#include "apsense/common/csv.hpp"
#include "apsense/common/error.hpp"

namespace apsense::imagery {

SceneLabel scene_label_from_string(const std::string& s) {
  if (s == "hotspot") return SceneLabel::hotspot;
  if (s == "non_hotspot") return SceneLabel::non_hotspot;
  fail_input("unknown scene label '" + s + "'");
}

std::string to_string(SceneLabel label) {
  return label == SceneLabel::hotspot ? "hotspot" : "non_hotspot";
}

int to_class_index(SceneLabel label) {
  return label == SceneLabel::hotspot ? 1 : 0;
}

std::vector<ImageRequest> plan_requests(
    const std::vector<PlannedLocation>& locations) {
  std::vector<ImageRequest> out;
  out.reserve(locations.size() * 2);
  for (const PlannedLocation& loc : locations) {
    if (!std::isfinite(loc.lat) || !std::isfinite(loc.lon))
      fail_input("planned location has non-finite coordinates");
    for (const double offset : {60.0, -60.0}) {
      ImageRequest r;
      r.lat = loc.lat;
      r.lon = loc.lon;
      r.heading_offset = offset;
      r.label = loc.label;
      out.push_back(r);
    }
  }
  return out;
}

std::string request_key(const ImageRequest& request) {
  std::string key = csv::format_double(request.lat) + "_" +
                    csv::format_double(request.lon) + "_" +
                    csv::format_double(request.heading_offset) + "_" +
                    std::to_string(request.size);
  if (request.fov_deg) key += "_fov" + csv::format_double(*request.fov_deg);
  return key;
}

}  // namespace apsense::imagery
