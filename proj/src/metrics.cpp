#include "ecmlfd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ecmlfd/errors.hpp"

namespace ecmlfd {

namespace {

template <typename Stats>
Stats summarize(std::vector<double> errors) {
  Stats s;
  s.n = errors.size();
  const double n = static_cast<double>(s.n);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double e : errors) {
    sum += e;
    sum_sq += e * e;
  }
  s.mean = sum / n;
  s.rmse = std::sqrt(sum_sq / n);
  double dev = 0.0;
  for (double e : errors) dev += (e - s.mean) * (e - s.mean);
  s.std = std::sqrt(dev / n);
  s.sample_std = s.n > 1 ? std::sqrt(dev / (n - 1.0)) : 0.0;
  s.errors = std::move(errors);
  return s;
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("predicted and truth series differ in length");
  if (a == 0) throw std::invalid_argument("error statistics need at least one sample");
}

std::vector<Vec3> gradient(std::span<const Vec3> x, double dt) {
  const std::size_t n = x.size();
  std::vector<Vec3> g(n);
  g[0] = (x[1] - x[0]) / dt;
  g[n - 1] = (x[n - 1] - x[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
  return g;
}

}  // namespace

PositionErrorStats position_error_stats(std::span<const Vec3> predicted, std::span<const Vec3> truth) {
  check_lengths(predicted.size(), truth.size());
  std::vector<double> errors(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) errors[i] = 1000.0 * (predicted[i] - truth[i]).norm();
  return summarize<PositionErrorStats>(std::move(errors));
}

OrientationErrorStats angular_offset_stats(std::span<const UnitQuaternion> predicted,
                                           std::span<const UnitQuaternion> truth) {
  check_lengths(predicted.size(), truth.size());
  std::vector<double> errors(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) errors[i] = rad_to_deg(quat_angle(predicted[i], truth[i]));
  return summarize<OrientationErrorStats>(std::move(errors));
}

namespace {

struct JerkIntegral {
  double dlj = 0.0;
  bool at_roundoff = false;  // every jerk sample is indistinguishable from zero
};

JerkIntegral jerk_integral(std::span<const Vec3> trajectory, double dt) {
  if (trajectory.size() < 4) throw std::invalid_argument("jerk metric needs at least 4 samples");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("sample interval must be > 0");
  const std::vector<Vec3> vel = gradient(trajectory, dt);
  const std::vector<Vec3> acc = gradient(vel, dt);
  const std::vector<Vec3> jerk = gradient(acc, dt);

  double v_peak = 0.0;
  for (const Vec3& v : vel) v_peak = std::max(v_peak, v.norm());
  if (!(v_peak > 0.0)) throw NumericalError("jerk metric undefined for a static trajectory");

  double scale = 0.0;
  for (const Vec3& p : trajectory) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * scale / (dt * dt * dt);
  double jerk_max = 0.0;
  for (const Vec3& j : jerk) jerk_max = std::max(jerk_max, j.norm());

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < jerk.size(); ++i) {
    integral += 0.5 * dt * (jerk[i].squaredNorm() + jerk[i + 1].squaredNorm());
  }
  const double duration = static_cast<double>(trajectory.size() - 1) * dt;
  return {-std::pow(duration, 3) / (v_peak * v_peak) * integral, jerk_max <= floor};
}

}  // namespace

double dimensionless_jerk(std::span<const Vec3> trajectory, double dt) {
  return jerk_integral(trajectory, dt).dlj;
}

double ldlj(std::span<const Vec3> trajectory, double dt) {
  const JerkIntegral j = jerk_integral(trajectory, dt);
  const double magnitude = std::abs(j.dlj);
  if (j.at_roundoff || magnitude <= std::exp(-kLdljCap)) return kLdljCap;
  return std::min(kLdljCap, -std::log(magnitude));
}

}  // namespace ecmlfd
