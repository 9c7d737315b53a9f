#include "apsense/hud/homography.hpp"

#include <cmath>

#include "apsense/common/error.hpp"

namespace apsense::hud {
namespace {

Eigen::Matrix3d normalizing_transform(const std::vector<Eigen::Vector2d>& pts) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());

  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(pts.size());
  if (mean_dist < 1e-12)
    fail_input("homography points are (nearly) coincident");

  const double s = std::sqrt(2.0) / mean_dist;
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  t(0, 0) = s;
  t(1, 1) = s;
  t(0, 2) = -s * centroid.x();
  t(1, 2) = -s * centroid.y();
  return t;
}

Eigen::Vector2d transform(const Eigen::Matrix3d& t, const Eigen::Vector2d& p) {
  const Eigen::Vector3d q = t * Eigen::Vector3d(p.x(), p.y(), 1.0);
  return {q.x() / q.z(), q.y() / q.z()};
}

}  // namespace

Eigen::Vector2d apply_homography(const Homography& h, const Eigen::Vector2d& p) {
  const Eigen::Vector3d q = h.m * Eigen::Vector3d(p.x(), p.y(), 1.0);
  if (std::abs(q.z()) < 1e-12)
    fail_numeric("point maps to the line at infinity");
  return {q.x() / q.z(), q.y() / q.z()};
}

HomographyFit estimate_homography(
    const std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>>& pairs) {
  if (pairs.size() < 4)
    fail_input("homography estimation needs at least 4 correspondences");
  for (const auto& [a, b] : pairs)
    if (!a.allFinite() || !b.allFinite())
      fail_input("homography correspondences must be finite");

  std::vector<Eigen::Vector2d> src, dst;
  src.reserve(pairs.size());
  dst.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    src.push_back(a);
    dst.push_back(b);
  }
  const Eigen::Matrix3d t_src = normalizing_transform(src);
  const Eigen::Matrix3d t_dst = normalizing_transform(dst);

  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d s = transform(t_src, src[static_cast<std::size_t>(i)]);
    const Eigen::Vector2d d = transform(t_dst, dst[static_cast<std::size_t>(i)]);
    a.row(2 * i) << -s.x(), -s.y(), -1.0, 0.0, 0.0, 0.0, s.x() * d.x(),
        s.y() * d.x(), d.x();
    a.row(2 * i + 1) << 0.0, 0.0, 0.0, -s.x(), -s.y(), -1.0, s.x() * d.y(),
        s.y() * d.y(), d.y();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  // With a unique solution the nullspace of the 9-column system is
  // one-dimensional. Count vanishing directions across the full
  // spectrum: rows fewer than unknowns (the 4-pair case) leave
  // implicit zeros beyond the computed singular values.
  const Eigen::Index k = sigma.size();
  Eigen::Index vanishing = 9 - k;
  for (Eigen::Index i = 0; i < k; ++i)
    if (sigma(i) < 1e-9 * sigma(0)) ++vanishing;
  if (vanishing >= 2)
    fail_input("degenerate point configuration for homography estimation");

  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);

  Eigen::Matrix3d full = t_dst.inverse() * hn * t_src;
  if (std::abs(full.determinant()) < 1e-12 * std::pow(full.norm(), 3))
    fail_input("estimated homography is singular");
  if (std::abs(full(2, 2)) > 1e-8)
    full /= full(2, 2);
  else
    full /= full.norm();

  HomographyFit fit;
  fit.h.m = full;
  double sq_sum = 0.0;
  for (const auto& [from, to] : pairs) {
    const Eigen::Vector2d mapped = apply_homography(fit.h, from);
    sq_sum += (mapped - to).squaredNorm();
  }
  fit.rms = std::sqrt(sq_sum / static_cast<double>(pairs.size()));
  return fit;
}

}  // namespace apsense::hud
