#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace antsim {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

using Vector2d = Vector2<double>;
using Vector3d = Vector3<double>;

/// Planar pose. Heading is kept unwrapped so accumulated rotation stays observable.
template <typename Scalar>
struct Pose2 {
  Vector2<Scalar> position = Vector2<Scalar>::Zero();
  Scalar heading = Scalar(0);
};

template <typename Scalar>
struct BodyTwist {
  Scalar v;      // forward speed
  Scalar omega;  // yaw rate, counter-clockwise positive
};

/// Differential drive: left/right track speeds to body twist.
template <typename Scalar>
BodyTwist<Scalar> body_velocity(Scalar v_left, Scalar v_right, Scalar track) {
  return {(v_left + v_right) / Scalar(2), (v_right - v_left) / track};
}

/// Exact constant-twist (unicycle arc) update.
template <typename Scalar>
Pose2<Scalar> integrate_pose(const Pose2<Scalar>& pose, Scalar v, Scalar omega, Scalar dt) {
  using std::abs;
  using std::cos;
  using std::sin;
  Pose2<Scalar> out = pose;
  const Scalar th0 = pose.heading;
  const Scalar th1 = th0 + omega * dt;
  if (abs(omega) < Scalar(1e-12)) {
    out.position += v * dt * Vector2<Scalar>(cos(th0), sin(th0));
  } else {
    const Scalar radius = v / omega;
    out.position += radius * Vector2<Scalar>(sin(th1) - sin(th0), cos(th0) - cos(th1));
  }
  out.heading = th1;
  return out;
}

/// First-order lag: distance covered over `dt` while speed relaxes from `v0` toward `u`.
template <typename Scalar>
Scalar lag_travel(Scalar v0, Scalar u, Scalar dt, Scalar tau) {
  using std::expm1;
  return u * dt - (v0 - u) * tau * expm1(-dt / tau);
}

template <typename Scalar>
Scalar lag_speed(Scalar v0, Scalar u, Scalar dt, Scalar tau) {
  using std::exp;
  return u + (v0 - u) * exp(-dt / tau);
}

template <typename Scalar>
Scalar cross2(const Vector2<Scalar>& a, const Vector2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Counter-clockwise convex hull (Andrew's monotone chain), collinear points dropped.
template <typename Scalar>
std::vector<Vector2<Scalar>> convex_hull(std::span<const Vector2<Scalar>> points) {
  std::vector<Vector2<Scalar>> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  std::vector<Vector2<Scalar>> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2<Scalar>(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2<Scalar>(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

template <typename Scalar>
Scalar segment_distance(const Vector2<Scalar>& p, const Vector2<Scalar>& a,
                        const Vector2<Scalar>& b) {
  const Vector2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  Scalar s = len2 > Scalar(0) ? (p - a).dot(ab) / len2 : Scalar(0);
  s = std::clamp(s, Scalar(0), Scalar(1));
  return (p - (a + s * ab)).norm();
}

/// Signed distance from `com` to the boundary of the support polygon spanned by
/// `feet`: positive inside, negative outside. Fewer than three non-collinear
/// contacts give -infinity.
template <typename Scalar>
Scalar stability_margin(std::span<const Vector2<Scalar>> feet, const Vector2<Scalar>& com) {
  const Scalar unstable = -std::numeric_limits<Scalar>::infinity();
  if (feet.size() < 3) return unstable;
  const auto hull = convex_hull<Scalar>(feet);
  if (hull.size() < 3) return unstable;

  Scalar dist = std::numeric_limits<Scalar>::infinity();
  bool inside = true;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    dist = std::min(dist, segment_distance<Scalar>(com, a, b));
    if (cross2<Scalar>(b - a, com - a) < Scalar(0)) inside = false;
  }
  return inside ? dist : -dist;
}

}  // namespace antsim
