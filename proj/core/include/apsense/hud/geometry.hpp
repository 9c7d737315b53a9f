#pragma once

#include <Eigen/Dense>

namespace apsense::hud {

// Cabin frame: X to the driver's right, Y up, Z forward through the
// windshield (right-handed).

/// Windshield modeled as a tilted planar rectangle. `mount` is the
/// lower-left corner; the lower edge runs along +X for `width` meters;
/// the surface rises along a direction tilted `tilt_rad` from the
/// horizontal (pi/2 = perfectly vertical glass, smaller = raked back
/// toward the cabin).
struct WindshieldGeometry {
  double width = 1.2;
  double height = 0.8;
  double tilt_rad = 1.2;
  Eigen::Vector3d mount{-0.6, 1.0, 0.8};

  Eigen::Vector3d edge_u() const { return {1.0, 0.0, 0.0}; }
  Eigen::Vector3d edge_v() const {
    return {0.0, std::sin(tilt_rad), -std::cos(tilt_rad)};
  }
  /// Unit normal (edge_u x edge_v); points toward +Z for vertical glass.
  Eigen::Vector3d normal() const {
    return {0.0, std::cos(tilt_rad), std::sin(tilt_rad)};
  }
};

struct ForeheadPose {
  Eigen::Vector3d position{0.0, 1.1, 0.0};
};

/// Direction to a point of interest as seen from the forehead:
/// alpha_x is the horizontal angle (positive right), alpha_y the
/// vertical angle (positive up), both in radians and within
/// (-pi/2, pi/2) so the ray always points forward.
struct PoiBearing {
  double alpha_x = 0.0;
  double alpha_y = 0.0;
};

struct PatchPoint {
  Eigen::Vector3d point;        // intersection in cabin coordinates
  double plane_u = 0.0;         // meters along the lower edge
  double plane_v = 0.0;         // meters up the glass
  bool inside_bounds = false;   // within [0,width] x [0,height]
};

/// Intersects the forehead->POI ray with the windshield plane. The ray
/// direction is (tan alpha_x, tan alpha_y, 1). A ray parallel to the
/// plane is a numeric error; an intersection behind the viewer is an
/// invalid-input error.
PatchPoint patch_point(const WindshieldGeometry& geometry,
                       const ForeheadPose& forehead, const PoiBearing& bearing);

/// Forward-facing pinhole camera; pixel origin is the top-left corner,
/// u grows right and v grows down.
struct CameraIntrinsics {
  int width = 640;
  int height = 640;
  double fov_x_rad = 1.0;
  double fov_y_rad = 1.0;
};

/// Bearing of the pixel's line of sight:
///   alpha_x = atan(((u - W/2) / (W/2)) * tan(fov_x / 2))
///   alpha_y = atan(((H/2 - v) / (H/2)) * tan(fov_y / 2))
PoiBearing bearing_from_pixel(const CameraIntrinsics& camera, double u, double v);

}  // namespace apsense::hud
