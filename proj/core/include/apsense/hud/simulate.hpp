#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "apsense/hud/geometry.hpp"

namespace apsense::hud {

/// What moves during a sweep: the head, the point of interest, or both
/// in lockstep.
enum class Scenario {
  fixed_head_moving_poi,
  moving_head_fixed_poi,
  both_moving,
};

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);

struct SimulationPlan {
  WindshieldGeometry geometry;
  Scenario scenario = Scenario::fixed_head_moving_poi;
  std::vector<Eigen::Vector3d> head_track;   // exactly 1 when the head is fixed
  std::vector<PoiBearing> bearing_track;     // exactly 1 when the POI is fixed
};

struct SimulationStep {
  int index = 0;
  ForeheadPose head;
  PoiBearing bearing;
  PatchPoint patch;
};

/// Runs patch_point across the sweep; an empty sweep yields an empty
/// trajectory. Points landing off the glass are reported with
/// inside_bounds=false (callers exclude them from any notification
/// set); geometric failures propagate as errors.
std::vector<SimulationStep> simulate(const SimulationPlan& plan);

/// JSON plan: geometry (width/height/tilt_deg/mount), scenario,
/// head_track, bearing_track_deg. Unknown keys are config errors.
SimulationPlan load_simulation_plan(const std::filesystem::path& path);

/// step,head_*,alpha_*_deg,patch xyz,plane_u,plane_v,inside columns;
/// byte-stable numeric formatting.
void write_simulation_csv(const std::filesystem::path& path,
                          const std::vector<SimulationStep>& steps);

}  // namespace apsense::hud
