#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace apsense::hud {

struct Homography {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
};

/// Projective mapping of a 2-D point; a point mapped to the line at
/// infinity (w ~ 0) is a numeric error.
Eigen::Vector2d apply_homography(const Homography& h, const Eigen::Vector2d& p);

struct HomographyFit {
  Homography h;
  double rms = 0.0;  // root-mean-square reprojection error over the inputs
};

/// Direct linear transform over >= 4 source->target correspondences,
/// with isotropic normalization (centroid to origin, mean distance
/// sqrt(2)) for conditioning. Degenerate configurations (e.g. three
/// collinear points among four) are invalid-input errors.
HomographyFit estimate_homography(
    const std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>>& pairs);

}  // namespace apsense::hud
