#include "apsense/geo/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "apsense/common/csv.hpp"
#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"

namespace apsense::geo {

namespace {

using csv::format_double;

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail_input(std::string("malformed ") + what + " value: '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<AccidentRecord> load_collision_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  const int lat_col = table.column("latitude");
  const int lon_col = table.column("longitude");
  if (lat_col < 0 || lon_col < 0) {
    fail_input("collision CSV needs latitude,longitude columns: " + path);
  }
  std::vector<AccidentRecord> records;
  records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const std::size_t need =
        static_cast<std::size_t>(std::max(lat_col, lon_col));
    if (row.size() <= need) continue;
    const std::string& lat_s = row[static_cast<std::size_t>(lat_col)];
    const std::string& lon_s = row[static_cast<std::size_t>(lon_col)];
    if (lat_s.empty() || lon_s.empty()) continue;  // unlocated event rows
    AccidentRecord r;
    r.lat = parse_double(lat_s, "latitude");
    r.lon = parse_double(lon_s, "longitude");
    if (r.lat < -90.0 || r.lat > 90.0 || r.lon < -180.0 || r.lon > 180.0) {
      fail_input("coordinate out of range in " + path);
    }
    records.push_back(r);
  }
  return records;
}

void write_hotspot_csv(const std::string& path,
                       const std::vector<Hotspot>& hotspots) {
  std::string out = "id,lat,lon,count\n";
  for (const Hotspot& h : hotspots) {
    out += std::to_string(h.id) + ',' + format_double(h.lat) + ',' +
           format_double(h.lon) + ',' + std::to_string(h.member_count) + '\n';
  }
  fs::atomic_write(path, out);
}

std::vector<Hotspot> load_hotspot_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  const int id_col = table.column("id");
  const int lat_col = table.column("lat");
  const int lon_col = table.column("lon");
  const int count_col = table.column("count");
  if (id_col < 0 || lat_col < 0 || lon_col < 0 || count_col < 0) {
    fail_input("hotspot CSV needs id,lat,lon,count columns: " + path);
  }
  std::vector<Hotspot> hotspots;
  for (const auto& row : table.rows) {
    Hotspot h;
    h.id = static_cast<int>(
        parse_double(row[static_cast<std::size_t>(id_col)], "id"));
    h.lat = parse_double(row[static_cast<std::size_t>(lat_col)], "lat");
    h.lon = parse_double(row[static_cast<std::size_t>(lon_col)], "lon");
    h.member_count = static_cast<int>(
        parse_double(row[static_cast<std::size_t>(count_col)], "count"));
    hotspots.push_back(h);
  }
  return hotspots;
}

void write_hotspot_geojson(const std::string& path,
                           const std::vector<Hotspot>& hotspots) {
  nlohmann::json features = nlohmann::json::array();
  for (const Hotspot& h : hotspots) {
    features.push_back({
        {"type", "Feature"},
        {"geometry",
         {{"type", "Point"}, {"coordinates", {h.lon, h.lat}}}},
        {"properties", {{"id", h.id}, {"count", h.member_count}}},
    });
  }
  nlohmann::json doc = {{"type", "FeatureCollection"},
                        {"features", features}};
  fs::atomic_write(path, doc.dump(2) + "\n");
}

}  // namespace apsense::geo
