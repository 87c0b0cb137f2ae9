#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ecmlfd/se3.hpp"

namespace ecmlfd {

/// Euclidean position errors in millimeters. `std` is the population
/// standard deviation, so rmse² = mean² + std²; `sample_std` uses n − 1 and
/// satisfies rmse² = mean² + ((n−1)/n)·sample_std².
struct PositionErrorStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;
  double sample_std = 0.0;
  double rmse = 0.0;
  std::vector<double> errors;
};

/// Geodesic angular offsets in degrees, same conventions.
struct OrientationErrorStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;
  double sample_std = 0.0;
  double rmse = 0.0;
  std::vector<double> errors;
};

struct ErrorReport {
  std::size_t n = 0;
  std::optional<PositionErrorStats> position;
  std::optional<OrientationErrorStats> orientation;
};

/// Inputs in meters, output in millimeters. Throws std::invalid_argument
/// on empty or unequal-length series.
PositionErrorStats position_error_stats(std::span<const Vec3> predicted, std::span<const Vec3> truth);

OrientationErrorStats angular_offset_stats(std::span<const UnitQuaternion> predicted,
                                           std::span<const UnitQuaternion> truth);

/// Returned by ldlj() when the jerk is zero up to roundoff or |DLJ| ≤ e^−50.
inline constexpr double kLdljCap = 50.0;

/// −(T³ / v_peak²)·∫‖jerk‖² dt with T = (n−1)·dt, dimensionless in both
/// length and time. Derivatives are repeated gradients (central differences
/// inside, one-sided at the ends), the integral is trapezoidal. Throws std::invalid_argument for fewer than 4
/// samples or dt ≤ 0 and NumericalError for a static trajectory.
double dimensionless_jerk(std::span<const Vec3> trajectory, double dt);

/// −ln|DLJ|, capped at kLdljCap. Larger is smoother.
double ldlj(std::span<const Vec3> trajectory, double dt);

}  // namespace ecmlfd
