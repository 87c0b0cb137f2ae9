#include "ecmlfd/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ecmlfd/errors.hpp"

namespace ecmlfd {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

double arc_margin(double radius, double angle) {
  return radius * std::sin(std::clamp(angle, -kHalfPi, kHalfPi));
}

}  // namespace

WorkspaceBounds bounds_from_limits(const JointLimits& limits, const EcmDhTable& dh) {
  const double offset = dh.radial_offset();
  return {limits.q3.lower + offset, limits.q3.upper + offset, limits.q1, limits.q2};
}

std::string_view surface_name(Surface s) {
  switch (s) {
    case Surface::InnerSphere: return "inner_sphere";
    case Surface::OuterSphere: return "outer_sphere";
    case Surface::LowerCone: return "lower_cone";
    case Surface::UpperCone: return "upper_cone";
    case Surface::LowerPlane: return "lower_plane";
    case Surface::UpperPlane: return "upper_plane";
  }
  return "unknown";
}

double SurfaceDistances::min() const { return *std::min_element(values.begin(), values.end()); }

Surface SurfaceDistances::closest() const {
  return static_cast<Surface>(std::min_element(values.begin(), values.end()) - values.begin());
}

Verdict classify_position(const Vec3& p, const WorkspaceBounds& bounds, const Buffer& buffer) {
  Verdict v;
  const double r = p.norm();
  v.per_surface[Surface::InnerSphere] = r - bounds.inner_radius;
  v.per_surface[Surface::OuterSphere] = bounds.outer_radius - r;

  // Distance from the q1 rotation axis (the y axis of the RCM frame).
  const double rho = std::hypot(p.x(), p.z());
  double q1 = 0.0, q2 = 0.0;
  if (r > 0.0) {
    try {
      const DirectionAngles dir = solve_direction(p, bounds.q1.upper);
      q1 = dir.q1;
      q2 = dir.q2;
    } catch (const UnreachableError&) {
      // On the y axis: q1 is free and its planes have zero distance.
      q2 = p.y() > 0.0 ? -kHalfPi : kHalfPi;
    }
  }
  v.per_surface[Surface::LowerCone] = arc_margin(r, q2 - bounds.q2.lower);
  v.per_surface[Surface::UpperCone] = arc_margin(r, bounds.q2.upper - q2);
  v.per_surface[Surface::LowerPlane] = arc_margin(rho, q1 - bounds.q1.lower);
  v.per_surface[Surface::UpperPlane] = arc_margin(rho, bounds.q1.upper - q1);

  v.min_signed_distance = v.per_surface.min();
  v.position_ok = std::isfinite(v.min_signed_distance) &&
                  v.min_signed_distance >= buffer.linear - kBoundaryTolerance;
  v.valid = v.position_ok;
  return v;
}

Verdict validate_pose(const Transform& pose, const WorkspaceBounds& bounds, const Buffer& buffer,
                      const JointLimits& limits) {
  Verdict v = classify_position(pose.translation(), bounds, buffer);
  const double q4 = solve_roll(pose.rotation());
  v.q4 = q4;
  v.orientation_ok = q4 >= limits.q4.lower + buffer.angular - kBoundaryTolerance &&
                     q4 <= limits.q4.upper - buffer.angular + kBoundaryTolerance;
  v.valid = v.position_ok && *v.orientation_ok;
  return v;
}

std::vector<unsigned char> validate_poses(std::span<const Transform> poses, const WorkspaceBounds& bounds,
                                          const Buffer& buffer, const JointLimits& limits) {
  std::vector<unsigned char> ok(poses.size());
  const auto n = static_cast<std::ptrdiff_t>(poses.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    ok[static_cast<std::size_t>(i)] = validate_pose(poses[static_cast<std::size_t>(i)], bounds, buffer, limits).valid;
  }
  return ok;
}

void check_buffer_feasible(const WorkspaceBounds& bounds, const JointLimits& limits,
                           const Buffer& buffer) {
  if (!(buffer.linear >= 0.0) || !(buffer.angular >= 0.0)) {
    throw ConfigError("buffers must be non-negative");
  }
  if (2.0 * buffer.linear >= bounds.outer_radius - bounds.inner_radius) {
    throw ConfigError("linear buffer leaves no valid position (exceeds half the shell thickness)");
  }
  if (2.0 * buffer.angular >= limits.q4.width()) {
    throw ConfigError("angular buffer leaves no valid roll (exceeds half the q4 range)");
  }
}

Transform to_rcm_frame(const Transform& pose_in_base, const RcmConfig& cfg) {
  return invert(cfg.base_to_rcm) * pose_in_base;
}

}  // namespace ecmlfd
