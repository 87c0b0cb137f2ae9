#include "ecmlfd/synthetic.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ecmlfd/ecm_kinematics.hpp"
#include "ecmlfd/errors.hpp"
#include "ecmlfd/rng.hpp"

namespace ecmlfd {

namespace {

constexpr double kGazeTimeConstant = 1.0;  // s

struct ArmMotion {
  int axis;
  double u;
};

// Profile value and axis for each tool arm at time t.
std::pair<ArmMotion, ArmMotion> arm_motion(const TrajectorySpec& spec, double t) {
  const double lag = spec.frequency > 0.0 ? 0.25 / spec.frequency : 0.0;
  switch (spec.kind) {
    case TrajectoryKind::Line:
      return {{spec.axis, line_profile(spec.frequency, t)},
              {spec.axis, line_profile(spec.frequency, t - lag)}};
    case TrajectoryKind::Sinusoid:
      return {{spec.axis, sinusoid_profile(spec.frequency, t)},
              {spec.axis, sinusoid_profile(spec.frequency, t - lag)}};
    case TrajectoryKind::Mixed:
      return {{spec.axis, line_profile(spec.frequency, t)},
              {(spec.axis + 1) % 3, sinusoid_profile(1.7 * spec.frequency, t)}};
  }
  throw std::logic_error("unknown trajectory kind");
}

}  // namespace

std::string_view trajectory_name(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::Line:
      return "line";
    case TrajectoryKind::Sinusoid:
      return "sin";
    case TrajectoryKind::Mixed:
      return "mixed";
  }
  return "?";
}

TrajectoryKind parse_trajectory(std::string_view name) {
  if (name == "line") return TrajectoryKind::Line;
  if (name == "sin" || name == "sinusoid") return TrajectoryKind::Sinusoid;
  if (name == "mixed") return TrajectoryKind::Mixed;
  throw std::invalid_argument("unknown trajectory kind '" + std::string(name) + "'");
}

void TrajectorySpec::validate() const {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("rate must be > 0");
  if (!(duration > 0.0) || !std::isfinite(duration)) throw std::invalid_argument("duration must be > 0");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("amplitude must be >= 0");
  if (!(frequency >= 0.0) || !std::isfinite(frequency)) throw std::invalid_argument("frequency must be >= 0");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  if (!(gaze_wander >= 0.0)) throw std::invalid_argument("gaze wander must be >= 0");
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
  if (!std::isfinite(start_time)) throw std::invalid_argument("start time must be finite");
}

std::size_t TrajectorySpec::sample_count() const {
  return static_cast<std::size_t>(std::llround(duration * rate));
}

Rotation3 look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 dir = target - eye;
  if (!(dir.norm() > 0.0)) throw std::invalid_argument("look_at: eye coincides with target");
  const Vec3 z = dir.normalized();
  const Vec3 x_raw = up.cross(z);
  if (x_raw.norm() < 1e-9) throw std::invalid_argument("look_at: up vector parallel to view direction");
  const Vec3 x = x_raw.normalized();
  const Vec3 y = z.cross(x);
  Mat3 m;
  m.col(0) = x;
  m.col(1) = y;
  m.col(2) = z;
  return Rotation3::from_matrix(m);
}

Transform camera_law_pose(const CameraLaw& law, const Vec3& target) {
  const Vec3 eye = law.offset + law.scale * target;
  return {look_at(eye, target, law.up), eye};
}

double line_profile(double frequency, double t) {
  return (2.0 / std::numbers::pi) * std::asin(std::sin(2.0 * std::numbers::pi * frequency * t));
}

double sinusoid_profile(double frequency, double t) {
  return std::sin(2.0 * std::numbers::pi * frequency * t);
}

DataPool generate_synthetic(const TrajectorySpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t n = spec.sample_count();
  const double dt = 1.0 / spec.rate;
  Rng noise_rng(derive_seed(seed, 1));
  Rng gaze_rng(derive_seed(seed, 2));
  const double rho = std::exp(-dt / kGazeTimeConstant);
  const double innovation = spec.gaze_wander * std::sqrt(1.0 - rho * rho);
  // Start the wander in its stationary distribution.
  double wx = spec.gaze_wander * gaze_rng.normal();
  double wy = spec.gaze_wander * gaze_rng.normal();
  const Vec3 center = 0.5 * (spec.psm1_base + spec.psm3_base);

  std::ostringstream prov;
  prov.precision(17);
  prov << "synthetic traj=" << trajectory_name(spec.kind) << " n=" << n << " rate=" << spec.rate
       << " amplitude=" << spec.amplitude << " frequency=" << spec.frequency << " axis=" << spec.axis
       << " noise=" << spec.noise_sigma << " gaze_wander=" << spec.gaze_wander
       << " gaze_gain=" << spec.law.gaze_gain << " seed=" << seed;

  DataPool pool;
  pool.provenance = prov.str();
  pool.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const auto [m1, m3] = arm_motion(spec, t);
    DataRecord r;
    r.timestamp = spec.start_time + t;
    r.psm1_pos = spec.psm1_base;
    r.psm1_pos(m1.axis) += spec.amplitude * m1.u;
    r.psm3_pos = spec.psm3_base;
    r.psm3_pos(m3.axis) += spec.amplitude * m3.u;
    r.psm1_rot = Rotation3::about_z(kSyntheticRollPerMeter * spec.amplitude * m1.u);
    r.psm3_rot = Rotation3::about_z(kSyntheticRollPerMeter * spec.amplitude * m3.u);

    const Vec3 mid = 0.5 * (r.psm1_pos + r.psm3_pos);
    const Vec3 target = mid + spec.law.gaze_gain * Vec3(wx, wy, 0.0);
    const Transform cam = camera_law_pose(spec.law, target);
    r.ecm_rot = cam.rotation();
    r.ecm_pos = cam.translation();
    if (spec.noise_sigma > 0.0) {
      for (int a = 0; a < 3; ++a) r.ecm_pos(a) += noise_rng.normal(0.0, spec.noise_sigma);
    }
    try {
      const JointVector4 q = inverse_kinematics({r.ecm_rot, r.ecm_pos});
      r.ecm_joints = {q.q1, q.q2, q.q3, q.q4};
    } catch (const UnreachableError&) {
      r.ecm_joints = {};
    }

    const double bx = 0.5 + (mid.x() - center.x()) / kGazeScreenSpan + wx;
    const double by = 0.5 + (mid.y() - center.y()) / kGazeScreenSpan + wy;
    r.gaze = {bx - kSyntheticEyeSeparation, by, bx + kSyntheticEyeSeparation, by, bx, by};
    r.pupil_diameters = {kSyntheticPupilDiameter, kSyntheticPupilDiameter};
    r.camera_moving = true;
    pool.records.push_back(r);

    if (spec.gaze_wander > 0.0) {
      wx = rho * wx + innovation * gaze_rng.normal();
      wy = rho * wy + innovation * gaze_rng.normal();
    }
  }
  return pool;
}

}  // namespace ecmlfd
