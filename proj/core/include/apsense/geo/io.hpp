#pragma once

#include <string>

#include "apsense/geo/types.hpp"

namespace apsense::geo {

/// Load collision records from a CSV with at least `latitude,longitude`
/// columns (case-insensitive header match, extra columns ignored). Rows
/// with empty coordinate fields are skipped; malformed or out-of-range
/// values raise an input error.
std::vector<AccidentRecord> load_collision_csv(const std::string& path);

/// Hotspot table, columns `id,lat,lon,count`.
void write_hotspot_csv(const std::string& path,
                       const std::vector<Hotspot>& hotspots);
std::vector<Hotspot> load_hotspot_csv(const std::string& path);

/// GeoJSON FeatureCollection of Point features (lon/lat order) with
/// `id` and `count` properties.
void write_hotspot_geojson(const std::string& path,
                           const std::vector<Hotspot>& hotspots);

}  // namespace apsense::geo
