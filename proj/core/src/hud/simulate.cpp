#include "apsense/hud/simulate.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "apsense/common/csv.hpp"
#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"

namespace apsense::hud {
namespace {

constexpr double kDegToRad = 3.141592653589793 / 180.0;
constexpr double kRadToDeg = 180.0 / 3.141592653589793;

void reject_unknown_keys(const nlohmann::json& obj,
                         const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      fail_config("unknown key '" + key + "' in " + where);
  }
}

Eigen::Vector3d parse_vec3(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    fail_config(where + " must be an array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

Scenario scenario_from_string(const std::string& s) {
  if (s == "fixed_head_moving_poi") return Scenario::fixed_head_moving_poi;
  if (s == "moving_head_fixed_poi") return Scenario::moving_head_fixed_poi;
  if (s == "both_moving") return Scenario::both_moving;
  fail_config("unknown scenario '" + s + "'");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::fixed_head_moving_poi: return "fixed_head_moving_poi";
    case Scenario::moving_head_fixed_poi: return "moving_head_fixed_poi";
    case Scenario::both_moving: return "both_moving";
  }
  return "?";
}

std::vector<SimulationStep> simulate(const SimulationPlan& plan) {
  const std::size_t heads = plan.head_track.size();
  const std::size_t bearings = plan.bearing_track.size();
  std::size_t steps = 0;
  switch (plan.scenario) {
    case Scenario::fixed_head_moving_poi:
      if (heads != 1) fail_input("a fixed head needs exactly one head pose");
      steps = bearings;  // an empty sweep yields an empty trajectory
      break;
    case Scenario::moving_head_fixed_poi:
      if (bearings != 1) fail_input("a fixed POI needs exactly one bearing");
      steps = heads;
      break;
    case Scenario::both_moving:
      if (heads != bearings)
        fail_input("joint sweeps need equal track lengths");
      steps = heads;
      break;
  }

  std::vector<SimulationStep> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    SimulationStep step;
    step.index = static_cast<int>(i);
    step.head.position = plan.head_track[heads == 1 ? 0 : i];
    step.bearing = plan.bearing_track[bearings == 1 ? 0 : i];
    step.patch = patch_point(plan.geometry, step.head, step.bearing);
    out.push_back(step);
  }
  return out;
}

SimulationPlan load_simulation_plan(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(apsense::fs::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    fail_config("simulation plan is not valid JSON: " + std::string(e.what()));
  }
  reject_unknown_keys(j, {"geometry", "scenario", "head_track",
                          "bearing_track_deg"},
                      "simulation plan");
  if (!j.contains("geometry") || !j.contains("scenario") ||
      !j.contains("head_track") || !j.contains("bearing_track_deg"))
    fail_config("simulation plan needs geometry, scenario and both tracks");

  SimulationPlan plan;
  const nlohmann::json& g = j["geometry"];
  reject_unknown_keys(g, {"width", "height", "tilt_deg", "mount"},
                      "simulation geometry");
  if (!g.contains("width") || !g.contains("height") || !g.contains("tilt_deg") ||
      !g.contains("mount"))
    fail_config("geometry needs width, height, tilt_deg and mount");
  plan.geometry.width = g["width"].get<double>();
  plan.geometry.height = g["height"].get<double>();
  plan.geometry.tilt_rad = g["tilt_deg"].get<double>() * kDegToRad;
  plan.geometry.mount = parse_vec3(g["mount"], "geometry mount");

  plan.scenario = scenario_from_string(j["scenario"].get<std::string>());

  for (const auto& h : j["head_track"])
    plan.head_track.push_back(parse_vec3(h, "head_track entry"));
  for (const auto& b : j["bearing_track_deg"]) {
    if (!b.is_array() || b.size() != 2)
      fail_config("bearing_track_deg entries must be [alpha_x, alpha_y]");
    plan.bearing_track.push_back(
        {b[0].get<double>() * kDegToRad, b[1].get<double>() * kDegToRad});
  }
  return plan;
}

void write_simulation_csv(const std::filesystem::path& path,
                          const std::vector<SimulationStep>& steps) {
  std::string out =
      "step,head_x,head_y,head_z,alpha_x_deg,alpha_y_deg,"
      "patch_x,patch_y,patch_z,plane_u,plane_v,inside\n";
  using csv::format_double;
  for (const SimulationStep& s : steps) {
    out += csv::join_row({
        std::to_string(s.index),
        format_double(s.head.position.x()),
        format_double(s.head.position.y()),
        format_double(s.head.position.z()),
        format_double(s.bearing.alpha_x * kRadToDeg),
        format_double(s.bearing.alpha_y * kRadToDeg),
        format_double(s.patch.point.x()),
        format_double(s.patch.point.y()),
        format_double(s.patch.point.z()),
        format_double(s.patch.plane_u),
        format_double(s.patch.plane_v),
        s.patch.inside_bounds ? "1" : "0",
    });
    out += '\n';
  }
  apsense::fs::atomic_write(path, out);
}

}  // namespace apsense::hud
