#include "apsense/hud/geometry.hpp"

#include <cmath>

#include "apsense/common/error.hpp"

namespace apsense::hud {
namespace {

constexpr double kHalfPi = 1.5707963267948966;

void validate(const WindshieldGeometry& g) {
  if (!(g.width > 0.0) || !(g.height > 0.0))
    fail_input("windshield width and height must be positive");
  if (!(g.tilt_rad > 0.0) || !(g.tilt_rad < 3.141592653589793))
    fail_input("windshield tilt must lie in (0, pi)");
  if (!g.mount.allFinite()) fail_input("windshield mount must be finite");
}

void validate(const PoiBearing& b) {
  if (!(std::abs(b.alpha_x) < kHalfPi) || !(std::abs(b.alpha_y) < kHalfPi))
    fail_input("bearing angles must lie in (-pi/2, pi/2)");
}

}  // namespace

PatchPoint patch_point(const WindshieldGeometry& geometry,
                       const ForeheadPose& forehead, const PoiBearing& bearing) {
  validate(geometry);
  validate(bearing);
  if (!forehead.position.allFinite())
    fail_input("forehead position must be finite");

  const Eigen::Vector3d dir(std::tan(bearing.alpha_x), std::tan(bearing.alpha_y),
                            1.0);
  const Eigen::Vector3d n = geometry.normal();
  const double denom = n.dot(dir);
  if (std::abs(denom) < 1e-12 * dir.norm())
    fail_numeric("sight ray is parallel to the windshield plane");

  const double t = n.dot(geometry.mount - forehead.position) / denom;
  if (t <= 0.0)
    fail_input("sight ray meets the windshield plane behind the viewer");

  PatchPoint out;
  out.point = forehead.position + t * dir;
  const Eigen::Vector3d rel = out.point - geometry.mount;
  out.plane_u = rel.dot(geometry.edge_u());
  out.plane_v = rel.dot(geometry.edge_v());
  out.inside_bounds = out.plane_u >= 0.0 && out.plane_u <= geometry.width &&
                      out.plane_v >= 0.0 && out.plane_v <= geometry.height;
  return out;
}

PoiBearing bearing_from_pixel(const CameraIntrinsics& camera, double u, double v) {
  if (camera.width < 1 || camera.height < 1)
    fail_input("camera raster must be at least 1x1");
  if (!(camera.fov_x_rad > 0.0) || camera.fov_x_rad >= 3.141592653589793 ||
      !(camera.fov_y_rad > 0.0) || camera.fov_y_rad >= 3.141592653589793)
    fail_input("camera field of view must lie in (0, pi)");
  if (u < 0.0 || u > camera.width || v < 0.0 || v > camera.height)
    fail_input("pixel coordinates fall outside the image");

  const double half_w = camera.width / 2.0;
  const double half_h = camera.height / 2.0;
  PoiBearing b;
  b.alpha_x = std::atan((u - half_w) / half_w * std::tan(camera.fov_x_rad / 2.0));
  b.alpha_y = std::atan((half_h - v) / half_h * std::tan(camera.fov_y_rad / 2.0));
  return b;
}

}  // namespace apsense::hud
