#pragma once

#include <optional>
#include <string>
#include <vector>

namespace apsense::imagery {

enum class SceneLabel { hotspot, non_hotspot };

SceneLabel scene_label_from_string(const std::string& s);
std::string to_string(SceneLabel label);
/// Class index used by the classifier: hotspot = 1 (positive class).
int to_class_index(SceneLabel label);

/// One street-view acquisition. The heading offset is applied relative
/// to the panorama's default heading; raw acquisitions are 640x640.
struct ImageRequest {
  double lat = 0.0;
  double lon = 0.0;
  double heading_offset = 0.0;  // degrees; +60 or -60 in planned sets
  int size = 640;               // square edge in pixels
  std::optional<double> fov_deg;  // unset = service default
  SceneLabel label = SceneLabel::non_hotspot;
};

struct PlannedLocation {
  double lat = 0.0;
  double lon = 0.0;
  SceneLabel label = SceneLabel::non_hotspot;
};

/// Two requests per location, +60 first then -60, in input order.
std::vector<ImageRequest> plan_requests(
    const std::vector<PlannedLocation>& locations);

/// Canonical identity string for a request (drives fixture lookup and
/// cache addressing). Two requests with the same key are the same
/// acquisition.
std::string request_key(const ImageRequest& request);

}  // namespace apsense::imagery
