#pragma once

#include <array>

#include "ecmlfd/se3.hpp"

namespace ecmlfd {

/// ECM joint coordinates: q1, q2, q4 in radians (revolute), q3 in meters
/// (prismatic insertion).
struct JointVector4 {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double q4 = 0.0;

  bool operator==(const JointVector4&) const = default;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double v) const { return v >= lower && v <= upper; }
  bool operator==(const Interval&) const = default;
};

/// Per-joint bounds; defaults are the ECM's published joint limits.
struct JointLimits {
  Interval q1{-1.5708, 1.5708};
  Interval q2{-0.7853, 1.1344};
  Interval q3{0.0, 0.235};
  Interval q4{-1.5708, 1.5708};

  /// Throws ConfigError unless lower < upper on every joint.
  void validate() const;
  bool operator==(const JointLimits&) const = default;
};

/// Modified-DH table of the RRPR camera arm.
struct EcmDhTable {
  std::array<DhRow, 4> rows = default_rows();

  static std::array<DhRow, 4> default_rows();

  /// Distance from the remote center to the camera tip at zero insertion:
  /// d3 + d4 (0.0007 m for the default table).
  double radial_offset() const { return rows[2].d + rows[3].d; }

  /// The closed-form kinematics only hold for the default joint structure.
  /// Throws ConfigError if joint kinds, a, theta, alpha, d1 or d2 differ from
  /// the defaults; d3 and d4 may be overridden.
  void validate() const;
};

/// Closed-form pose of the camera tip in the RCM frame.
Transform forward_kinematics(const JointVector4& q, const EcmDhTable& dh = {});

/// Same pose via the product of the four elementary DH transforms.
Transform forward_kinematics_chain(const JointVector4& q, const EcmDhTable& dh = {});

struct PositionJoints {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
};

/// |p3| below this is treated as the p3 = 0 branch.
inline constexpr double kAxisTolerance = 1e-12;

struct DirectionAngles {
  double q1 = 0.0;
  double q2 = 0.0;
};

/// q1 and q2 pointing the camera shaft at `p`; `q1_upper` is used on the
/// p3 = 0 branch. Throws UnreachableError when p = 0 or p lies on the y axis.
DirectionAngles solve_direction(const Vec3& p, double q1_upper);

/// Joint angles q1, q2 and insertion q3 that place the camera tip at `p`.
/// Throws UnreachableError when p = 0 or p lies on the y axis.
PositionJoints solve_position(const Vec3& p, const EcmDhTable& dh = {},
                              const JointLimits& limits = {});

/// Roll joint recovered from the second row of the tip rotation.
double solve_roll(const Rotation3& r);

/// Exact inverse kinematics. Limits are not enforced; U1 (the q1 upper
/// limit) is used on the p3 = 0 branch.
JointVector4 inverse_kinematics(const Transform& pose, const EcmDhTable& dh = {},
                                const JointLimits& limits = {});

/// True iff q1, q2, q4 lie in their limits shrunk by `angular_buffer` and q3
/// in its limits shrunk by `linear_buffer`. Throws std::invalid_argument for
/// negative buffers or buffers that empty an interval.
bool within_limits(const JointVector4& q, const JointLimits& limits,
                   double angular_buffer = 0.0, double linear_buffer = 0.0);

}  // namespace ecmlfd
