#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ecmlfd/dataset.hpp"

namespace ecmlfd {

enum class TrajectoryKind { Line, Sinusoid, Mixed };

std::string_view trajectory_name(TrajectoryKind k);
/// "line", "sin"/"sinusoid" or "mixed"; throws std::invalid_argument.
TrajectoryKind parse_trajectory(std::string_view name);

/// Ground truth the camera follows. The camera sits at
/// offset + scale·target and looks at target, where target is the tool
/// midpoint shifted by gaze_gain·(wx, wy, 0) for gaze wander (wx, wy).
struct CameraLaw {
  Vec3 offset{0.0, 0.0, -0.05};
  double scale = 0.5;
  Vec3 up{0.0, 0.0, -1.0};
  double gaze_gain = 0.0;  // m per unit of normalized gaze wander
};

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Line;
  double duration = 10.0;   // s
  double rate = 100.0;      // Hz
  double amplitude = 0.02;  // m
  double frequency = 0.2;   // Hz
  int axis = 0;             // 0, 1, 2 = x, y, z
  double noise_sigma = 0.0; // m, per axis on the camera position
  /// Stationary std of the gaze wander (normalized screen units), an AR(1)
  /// process with a 1 s time constant. Zero disables it.
  double gaze_wander = 0.0;
  double start_time = 1.6e9;  // epoch s
  Vec3 psm1_base{0.12, 0.03, -0.1};
  Vec3 psm3_base{0.12, -0.03, -0.1};
  CameraLaw law;

  /// Throws std::invalid_argument on a non-positive rate or duration,
  /// negative amplitude, frequency or noise, or a bad axis.
  void validate() const;
  std::size_t sample_count() const;
};

/// Screen span in meters mapped onto the unit gaze range.
inline constexpr double kGazeScreenSpan = 0.2;
inline constexpr double kSyntheticPupilDiameter = 3.5;  // mm
inline constexpr double kSyntheticEyeSeparation = 0.01;  // L/R offset from BPOG
/// Tool roll per meter of trajectory displacement.
inline constexpr double kSyntheticRollPerMeter = 15.0;

/// Rotation whose z axis points from `eye` to `target`, with x = up × z.
/// Throws std::invalid_argument when the directions are degenerate.
Rotation3 look_at(const Vec3& eye, const Vec3& target, const Vec3& up);

/// Noise-free camera pose for a look-at target.
Transform camera_law_pose(const CameraLaw& law, const Vec3& target);

/// Normalized profile in [-1, 1] for each arm at time t (s from the start).
double line_profile(double frequency, double t);
double sinusoid_profile(double frequency, double t);

DataPool generate_synthetic(const TrajectorySpec& spec, std::uint64_t seed);

}  // namespace ecmlfd
