#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "ecmlfd/ecm_kinematics.hpp"
#include "ecmlfd/synthetic.hpp"

using namespace ecmlfd;

namespace {

TrajectorySpec spec_of(TrajectoryKind kind, double amplitude = 0.02, double noise = 0.0) {
  TrajectorySpec s;
  s.kind = kind;
  s.duration = 5.0;
  s.rate = 100.0;
  s.amplitude = amplitude;
  s.noise_sigma = noise;
  return s;
}

}  // namespace

TEST_CASE("amplitude 0 and no noise gives constant records") {
  for (auto kind : {TrajectoryKind::Line, TrajectoryKind::Sinusoid, TrajectoryKind::Mixed}) {
    const TrajectorySpec s = spec_of(kind, 0.0);
    const DataPool p = generate_synthetic(s, 3);
    REQUIRE(p.size() == 500);
    const Vec3 mid = 0.5 * (s.psm1_base + s.psm3_base);
    const Transform law = camera_law_pose(s.law, mid);
    for (const auto& r : p.records) {
      CHECK(r.psm1_pos == p.records[0].psm1_pos);
      CHECK(r.psm3_pos == p.records[0].psm3_pos);
      CHECK(r.ecm_pos == law.translation());
      CHECK(r.ecm_rot == law.rotation());
      CHECK(r.gaze == p.records[0].gaze);
      CHECK(r.camera_moving);
    }
    CHECK((law.translation() - (s.law.offset + 0.5 * mid)).norm() == 0.0);
  }
}

TEST_CASE("line trajectory: camera position is affine in the tool positions") {
  const DataPool p = generate_synthetic(spec_of(TrajectoryKind::Line), 1);
  // Fit ecm = A·[psm1; psm3; 1] by least squares and require a zero residual.
  Eigen::MatrixXd X(p.size(), 7), Y(p.size(), 3);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& r = p.records[i];
    X.row(i) << r.psm1_pos.transpose(), r.psm3_pos.transpose(), 1.0;
    Y.row(i) = r.ecm_pos.transpose();
  }
  const Eigen::MatrixXd A = X.completeOrthogonalDecomposition().solve(Y);
  CHECK((X * A - Y).cwiseAbs().maxCoeff() < 1e-12);
  for (const auto& r : p.records) {
    const Vec3 mid = 0.5 * (r.psm1_pos + r.psm3_pos);
    CHECK((r.ecm_pos - (Vec3(0, 0, -0.05) + 0.5 * mid)).norm() < 1e-15);
  }
}

TEST_CASE("sinusoid trajectory matches an independent oracle") {
  TrajectorySpec s = spec_of(TrajectoryKind::Sinusoid, 0.03);
  s.frequency = 0.35;
  s.axis = 1;
  const DataPool p = generate_synthetic(s, 5);
  for (std::size_t i : {0u, 37u, 50u, 111u, 199u, 250u, 303u, 388u, 421u, 499u}) {
    const double t = static_cast<double>(i) / 100.0;
    const double w = 2 * std::numbers::pi * 0.35;
    const Vec3 p1 = s.psm1_base + Vec3(0, 0.03 * std::sin(w * t), 0);
    const Vec3 p3 = s.psm3_base + Vec3(0, 0.03 * std::sin(w * (t - 0.25 / 0.35)), 0);
    const auto& r = p.records[i];
    CHECK((r.psm1_pos - p1).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((r.psm3_pos - p3).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(r.timestamp - (1.6e9 + t)) <= 1e-6);
    const Vec3 eye = Vec3(0, 0, -0.05) + 0.25 * (p1 + p3);
    CHECK((r.ecm_pos - eye).cwiseAbs().maxCoeff() <= 1e-12);
    // The camera z axis points at the tool midpoint.
    const Vec3 dir = (0.5 * (p1 + p3) - eye).normalized();
    CHECK((r.ecm_rot.matrix().col(2) - dir).norm() <= 1e-12);
  }
}

TEST_CASE("line profile is a unit triangle wave") {
  CHECK(line_profile(1.0, 0.0) == 0.0);
  CHECK(line_profile(1.0, 0.25) == doctest::Approx(1.0));
  CHECK(line_profile(1.0, 0.125) == doctest::Approx(0.5));
  CHECK(line_profile(1.0, 0.75) == doctest::Approx(-1.0));
  // Constant slope between extremes.
  const double d1 = line_profile(0.2, 0.3) - line_profile(0.2, 0.2);
  const double d2 = line_profile(0.2, 0.9) - line_profile(0.2, 0.8);
  CHECK(d1 == doctest::Approx(d2));
}

TEST_CASE("rotations are valid and joints come from IK") {
  TrajectorySpec s = spec_of(TrajectoryKind::Mixed);
  s.gaze_wander = 0.05;
  s.law.gaze_gain = 0.02;
  const DataPool p = generate_synthetic(s, 9);
  for (const auto& r : p.records) {
    for (const Rotation3* rot : {&r.psm1_rot, &r.psm3_rot, &r.ecm_rot, &r.mtm_rot})
      CHECK(rot->orthonormality_error() < 1e-12);
    const Transform fk = forward_kinematics({r.ecm_joints[0], r.ecm_joints[1], r.ecm_joints[2], r.ecm_joints[3]});
    CHECK((fk.translation() - r.ecm_pos).norm() < 1e-9);
    CHECK(std::abs(r.gaze[4] - 0.5 * (r.gaze[0] + r.gaze[2])) < 1e-12);
  }
}

TEST_CASE("gaze wander is seeded and shifts the camera target") {
  TrajectorySpec s = spec_of(TrajectoryKind::Line);
  s.gaze_wander = 0.1;
  s.law.gaze_gain = 0.03;
  const DataPool a = generate_synthetic(s, 4);
  CHECK(a == generate_synthetic(s, 4));
  CHECK_FALSE(a.records == generate_synthetic(s, 5).records);
  // Camera position deviates from the plain law by gain·scale·wander.
  const Vec3 center = 0.5 * (s.psm1_base + s.psm3_base);
  double max_dev = 0.0;
  for (const auto& r : a.records) {
    const Vec3 mid = 0.5 * (r.psm1_pos + r.psm3_pos);
    const double wx = r.gaze[4] - 0.5 - (mid.x() - center.x()) / kGazeScreenSpan;
    const double wy = r.gaze[5] - 0.5 - (mid.y() - center.y()) / kGazeScreenSpan;
    const Vec3 expected = s.law.offset + 0.5 * (mid + 0.03 * Vec3(wx, wy, 0));
    CHECK((r.ecm_pos - expected).norm() < 1e-12);
    max_dev = std::max(max_dev, std::hypot(wx, wy));
  }
  CHECK(max_dev > 0.05);
}

TEST_CASE("noise only perturbs the camera position") {
  const DataPool clean = generate_synthetic(spec_of(TrajectoryKind::Line), 2);
  const DataPool noisy = generate_synthetic(spec_of(TrajectoryKind::Line, 0.02, 0.001), 2);
  double sq = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    CHECK(clean.records[i].psm1_pos == noisy.records[i].psm1_pos);
    CHECK(clean.records[i].ecm_rot == noisy.records[i].ecm_rot);
    sq += (clean.records[i].ecm_pos - noisy.records[i].ecm_pos).squaredNorm();
  }
  const double per_axis_std = std::sqrt(sq / (3.0 * clean.size()));
  CHECK(per_axis_std == doctest::Approx(0.001).epsilon(0.1));
}

TEST_CASE("spec validation and names") {
  TrajectorySpec s;
  s.rate = 0;
  CHECK_THROWS_AS(generate_synthetic(s, 1), std::invalid_argument);
  s = {};
  s.amplitude = -1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.axis = 3;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  CHECK(parse_trajectory("sin") == TrajectoryKind::Sinusoid);
  CHECK(parse_trajectory("sinusoid") == TrajectoryKind::Sinusoid);
  CHECK(parse_trajectory("mixed") == TrajectoryKind::Mixed);
  CHECK_THROWS_AS(parse_trajectory("zigzag"), std::invalid_argument);
  CHECK(trajectory_name(TrajectoryKind::Line) == "line");
  CHECK_THROWS_AS(look_at(Vec3::Zero(), Vec3::Zero(), Vec3::UnitZ()), std::invalid_argument);
  CHECK_THROWS_AS(look_at(Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitZ()), std::invalid_argument);
}
