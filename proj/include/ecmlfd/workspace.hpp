#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ecmlfd/ecm_kinematics.hpp"
#include "ecmlfd/se3.hpp"

namespace ecmlfd {

/// Reachable set of camera-tip positions: a spherical shell cut by two cones
/// (q2 limits) and two half-planes (q1 limits), all through the remote center.
struct WorkspaceBounds {
  double inner_radius = 0.0;  // m
  double outer_radius = 0.0;  // m
  Interval q1;                // rad
  Interval q2;                // rad
};

WorkspaceBounds bounds_from_limits(const JointLimits& limits, const EcmDhTable& dh = {});

inline constexpr double kDefaultLinearBuffer = 0.005;              // m
inline constexpr double kDefaultAngularBuffer = deg_to_rad(2.0);   // rad

struct Buffer {
  double linear = 0.0;   // m
  double angular = 0.0;  // rad

  static Buffer defaults() { return {kDefaultLinearBuffer, kDefaultAngularBuffer}; }
};

/// Slack for round-off on boundary points (m for distances, rad for q4).
inline constexpr double kBoundaryTolerance = 1e-12;

enum class Surface { InnerSphere, OuterSphere, LowerCone, UpperCone, LowerPlane, UpperPlane };
inline constexpr std::size_t kSurfaceCount = 6;

std::string_view surface_name(Surface s);

/// Signed Euclidean distances to each bounding surface, positive inside.
struct SurfaceDistances {
  std::array<double, kSurfaceCount> values{};

  double operator[](Surface s) const { return values[static_cast<std::size_t>(s)]; }
  double& operator[](Surface s) { return values[static_cast<std::size_t>(s)]; }
  double min() const;
  Surface closest() const;
};

struct Verdict {
  bool valid = false;
  double min_signed_distance = 0.0;
  SurfaceDistances per_surface;
  bool position_ok = false;
  // Unset when only the position was classified.
  std::optional<bool> orientation_ok;
  std::optional<double> q4;
};

/// Position-only verdict. Sphere margins are exact; cone margins are
/// r·sin(q2 margin) and half-plane margins ρ·sin(q1 margin), with ρ the
/// distance from the q1 axis and angular margins clamped to ±π/2.
Verdict classify_position(const Vec3& p, const WorkspaceBounds& bounds, const Buffer& buffer);

/// Position verdict plus the roll check q4 ∈ q4 limits shrunk by
/// buffer.angular.
Verdict validate_pose(const Transform& pose, const WorkspaceBounds& bounds, const Buffer& buffer,
                      const JointLimits& limits);

/// validate_pose(poses[i]).valid for every pose, OpenMP-parallel.
std::vector<unsigned char> validate_poses(std::span<const Transform> poses, const WorkspaceBounds& bounds,
                                          const Buffer& buffer, const JointLimits& limits);

/// Throws ConfigError when the buffer leaves no valid pose: 2·linear not
/// below the shell thickness, or 2·angular not below the q4 range.
void check_buffer_feasible(const WorkspaceBounds& bounds, const JointLimits& limits,
                           const Buffer& buffer);

/// Pose of the remote-center frame in the robot base frame.
struct RcmConfig {
  Transform base_to_rcm;
};

/// Re-expresses a base-frame pose in the RCM frame.
Transform to_rcm_frame(const Transform& pose_in_base, const RcmConfig& cfg);

}  // namespace ecmlfd
