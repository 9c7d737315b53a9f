#include "apsense/cli/monitor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "apsense/common/csv.hpp"
#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"
#include "apsense/geo/hotspots.hpp"

namespace apsense::cli {

namespace {

double parse_field(const std::string& cell, const std::string& what, std::size_t row) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    fail_input("trace row " + std::to_string(row) + ": bad " + what + " value '" +
               cell + "'");
  }
  return value;
}

}  // namespace

std::vector<TracePoint> load_trace_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path.string());
  const int c_ts = table.column("timestamp");
  const int c_lat = table.column("lat");
  const int c_lon = table.column("lon");
  if (c_ts < 0 || c_lat < 0 || c_lon < 0) {
    fail_input("trace CSV needs timestamp, lat and lon columns: " + path.string());
  }

  std::vector<TracePoint> trace;
  trace.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t needed =
        static_cast<std::size_t>(std::max(c_ts, std::max(c_lat, c_lon))) + 1;
    if (row.size() < needed) {
      fail_input("trace row " + std::to_string(i + 1) + " is too short");
    }
    TracePoint p;
    p.timestamp = parse_field(row[static_cast<std::size_t>(c_ts)], "timestamp", i + 1);
    p.lat = parse_field(row[static_cast<std::size_t>(c_lat)], "lat", i + 1);
    p.lon = parse_field(row[static_cast<std::size_t>(c_lon)], "lon", i + 1);
    if (p.lat < -90.0 || p.lat > 90.0 || p.lon < -180.0 || p.lon > 180.0) {
      fail_input("trace row " + std::to_string(i + 1) + ": coordinates out of range");
    }
    if (!trace.empty() && p.timestamp < trace.back().timestamp) {
      fail_input("trace is not time-ordered at row " + std::to_string(i + 1));
    }
    trace.push_back(p);
  }
  return trace;
}

std::string to_string(DriveMode m) {
  return m == DriveMode::cruise ? "cruise" : "ap_detection";
}

std::vector<ModeEvent> monitor_trace(const std::vector<TracePoint>& trace,
                                     const std::vector<geo::Hotspot>& hotspots,
                                     double radius_m, double hysteresis_m) {
  if (!(radius_m > 0.0) || !std::isfinite(radius_m)) {
    fail_input("monitor radius must be positive");
  }
  if (hysteresis_m < 0.0 || !std::isfinite(hysteresis_m)) {
    fail_input("monitor hysteresis must be non-negative");
  }
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].timestamp < trace[i - 1].timestamp) {
      fail_input("trace is not time-ordered at sample " + std::to_string(i));
    }
  }

  std::vector<ModeEvent> events;
  DriveMode mode = DriveMode::cruise;
  for (const auto& p : trace) {
    double best = std::numeric_limits<double>::infinity();
    int best_id = -1;
    for (const auto& h : hotspots) {
      const double d = geo::haversine_m(p.lat, p.lon, h.lat, h.lon);
      if (d < best) {
        best = d;
        best_id = h.id;
      }
    }
    if (mode == DriveMode::cruise && best <= radius_m) {
      mode = DriveMode::ap_detection;
      events.push_back({p.timestamp, p.lat, p.lon, mode, best_id});
    } else if (mode == DriveMode::ap_detection && best > radius_m + hysteresis_m) {
      mode = DriveMode::cruise;
      events.push_back({p.timestamp, p.lat, p.lon, mode, std::nullopt});
    }
  }
  return events;
}

void write_mode_events_csv(const std::filesystem::path& path,
                           const std::vector<ModeEvent>& events) {
  std::string out = "timestamp,lat,lon,mode,hotspot_id\n";
  for (const auto& e : events) {
    out += csv::join_row({csv::format_double(e.timestamp), csv::format_double(e.lat),
                          csv::format_double(e.lon), to_string(e.mode),
                          e.hotspot_id ? std::to_string(*e.hotspot_id) : ""});
    out += '\n';
  }
  fs::atomic_write(path, out);
}

}  // namespace apsense::cli
