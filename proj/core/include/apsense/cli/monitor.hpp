#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "apsense/geo/types.hpp"

namespace apsense::cli {

struct TracePoint {
  double timestamp = 0.0;  // seconds, monotone non-decreasing
  double lat = 0.0;
  double lon = 0.0;
};

/// CSV with a `timestamp,lat,lon` header (column order free, extra
/// columns ignored). Out-of-order timestamps are an input error.
std::vector<TracePoint> load_trace_csv(const std::filesystem::path& path);

enum class DriveMode { cruise, ap_detection };

std::string to_string(DriveMode m);

/// Mode switch at one trace sample. `hotspot_id` names the nearest
/// hotspot on entry and is absent on exit back to cruise.
struct ModeEvent {
  double timestamp = 0.0;
  double lat = 0.0;
  double lon = 0.0;
  DriveMode mode = DriveMode::cruise;
  std::optional<int> hotspot_id;
};

/// Trace-driven mode switching: every sample is checked against the
/// nearest hotspot centroid (haversine meters). Detection mode is
/// entered when that distance is <= radius_m (inclusive) and left when
/// it exceeds radius_m + hysteresis_m. The drive starts in cruise, so
/// events strictly alternate enter/exit.
std::vector<ModeEvent> monitor_trace(const std::vector<TracePoint>& trace,
                                     const std::vector<geo::Hotspot>& hotspots,
                                     double radius_m = 200.0,
                                     double hysteresis_m = 0.0);

/// Columns timestamp,lat,lon,mode,hotspot_id (id empty on exit rows).
void write_mode_events_csv(const std::filesystem::path& path,
                           const std::vector<ModeEvent>& events);

}  // namespace apsense::cli
