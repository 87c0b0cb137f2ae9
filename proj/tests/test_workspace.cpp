#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <vector>

#include "ecmlfd/errors.hpp"
#include "ecmlfd/rng.hpp"
#include "ecmlfd/workspace.hpp"

using namespace ecmlfd;

namespace {

const JointLimits kLimits;
const WorkspaceBounds kBounds = bounds_from_limits(kLimits);
constexpr Buffer kZero{0.0, 0.0};

JointVector4 random_in_limits(Rng& rng) {
  return {rng.uniform(kLimits.q1.lower, kLimits.q1.upper), rng.uniform(kLimits.q2.lower, kLimits.q2.upper),
          rng.uniform(kLimits.q3.lower, kLimits.q3.upper), rng.uniform(kLimits.q4.lower, kLimits.q4.upper)};
}

}  // namespace

TEST_CASE("bounds from limits") {
  CHECK(std::abs(kBounds.inner_radius - 0.0007) < 1e-15);
  CHECK(std::abs(kBounds.outer_radius - 0.2357) < 1e-15);
  CHECK(kBounds.q1 == kLimits.q1);
  CHECK(kBounds.q2 == kLimits.q2);

  JointLimits collapsed;
  collapsed.q3 = {0.0, 0.0};
  const WorkspaceBounds c = bounds_from_limits(collapsed);
  CHECK(std::abs(c.inner_radius - 0.0007) < 1e-15);
  CHECK(std::abs(c.outer_radius - 0.0007) < 1e-15);

  JointLimits wide;
  wide.q3.upper = 0.3;
  CHECK(std::abs(bounds_from_limits(wide).outer_radius - 0.3007) < 1e-15);
}

TEST_CASE("classify_position examples") {
  SUBCASE("straight down, inside") {
    const Verdict v = classify_position(Vec3(0, 0, -0.1), kBounds, kZero);
    CHECK(v.valid);
    CHECK_FALSE(v.orientation_ok.has_value());
    CHECK(std::abs(v.per_surface[Surface::InnerSphere] - 0.0993) < 1e-15);
    CHECK(std::abs(v.per_surface[Surface::OuterSphere] - 0.1357) < 1e-15);
    CHECK(std::abs(v.per_surface[Surface::LowerCone] - 0.1 * std::sin(0.7853)) < 1e-15);
    CHECK(std::abs(v.per_surface[Surface::UpperCone] - 0.1 * std::sin(1.1344)) < 1e-15);
    CHECK(std::abs(v.per_surface[Surface::UpperPlane] - 0.1 * std::sin(std::numbers::pi / 2)) < 1e-12);
    CHECK(v.per_surface.closest() == Surface::LowerCone);
  }
  SUBCASE("beyond the outer sphere") {
    const Verdict v = classify_position(Vec3(0, 0, -0.3), kBounds, kZero);
    CHECK_FALSE(v.valid);
    CHECK(std::abs(v.per_surface[Surface::OuterSphere] - (0.2357 - 0.3)) < 1e-15);
    CHECK(v.min_signed_distance < 0.0);
  }
  SUBCASE("large linear buffer is limited by the cone margin") {
    const Verdict v = classify_position(Vec3(0, 0, -0.1), kBounds, {0.099, 0.0});
    CHECK_FALSE(v.valid);
    CHECK(v.per_surface[Surface::InnerSphere] >= 0.099);
    CHECK(std::abs(v.min_signed_distance - 0.1 * std::sin(0.7853)) < 1e-15);
  }
  SUBCASE("points on the y axis and the origin") {
    CHECK_FALSE(classify_position(Vec3(0, 0.1, 0), kBounds, kZero).valid);
    CHECK_FALSE(classify_position(Vec3(0, -0.1, 0), kBounds, kZero).valid);
    CHECK_FALSE(classify_position(Vec3(0, 0, 0), kBounds, kZero).valid);
  }
  SUBCASE("above the RCM") {
    CHECK_FALSE(classify_position(Vec3(0, 0, 0.1), kBounds, kZero).valid);
  }
}

TEST_CASE("validate_pose examples") {
  const Verdict v = validate_pose(forward_kinematics({0, 0, 0.1, 0}), kBounds, kZero, kLimits);
  CHECK(v.valid);
  REQUIRE(v.q4.has_value());
  CHECK(std::abs(*v.q4) < 1e-15);

  const Verdict r = validate_pose(forward_kinematics({0, 0, 0.1, 1.5}), kBounds, {0.0, 0.1}, kLimits);
  REQUIRE(r.orientation_ok.has_value());
  CHECK_FALSE(*r.orientation_ok);
  CHECK(r.position_ok);
  CHECK_FALSE(r.valid);
}

TEST_CASE("FK point cloud: in-limit poses valid, radially displaced poses invalid") {
  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    const Transform t = forward_kinematics(random_in_limits(rng));
    const Verdict v = validate_pose(t, kBounds, kZero, kLimits);
    CHECK(v.valid);
    CHECK(v.min_signed_distance >= 0.0);
    const Vec3 out = t.translation().normalized() * (kBounds.outer_radius + 0.05);
    CHECK_FALSE(validate_pose(Transform(t.rotation(), out), kBounds, kZero, kLimits).valid);
  }
}

TEST_CASE("zero-buffer validity agrees with IK plus joint limits") {
  Rng rng(13);
  for (int i = 0; i < 20000; ++i) {
    const Vec3 p(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.05));
    const bool valid = classify_position(p, kBounds, kZero).valid;
    bool ik_ok = false;
    try {
      const PositionJoints pj = solve_position(p);
      ik_ok = kLimits.q1.contains(pj.q1) && kLimits.q2.contains(pj.q2) && kLimits.q3.contains(pj.q3);
    } catch (const UnreachableError&) {
    }
    CHECK(valid == ik_ok);
  }
}

TEST_CASE("grid over all joints: inside limits valid, outside invalid") {
  // Covers each joint from below its lower limit to above its upper limit.
  const int n = 9;
  auto grid = [&](const Interval& iv, int i) {
    const double pad = 0.1 * iv.width();
    return iv.lower - pad + (iv.width() + 2 * pad) * i / (n - 1);
  };
  int inside = 0, outside = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const JointVector4 q{grid(kLimits.q1, a), grid(kLimits.q2, b), grid(kLimits.q3, c), grid(kLimits.q4, d)};
          const Transform pose = forward_kinematics(q);
          const Verdict v = validate_pose(pose, kBounds, kZero, kLimits);
          if (q.q3 + 0.0007 < 0.0) {
            // A negative radius mirrors through the remote center onto the
            // configuration (q1 ± π, −q2, |r| − 0.0007), which may be in limits.
            const JointVector4 mirror{q.q1 + (q.q1 < 0 ? std::numbers::pi : -std::numbers::pi), -q.q2,
                                      -(q.q3 + 0.0007) - 0.0007, 0.0};
            CHECK((forward_kinematics(mirror).translation() - pose.translation()).norm() < 1e-12);
            continue;
          }
          if (within_limits(q, kLimits)) {
            CHECK(v.valid);
            ++inside;
          } else {
            CHECK_FALSE(v.valid);
            ++outside;
          }
        }
  CHECK(inside > 0);
  CHECK(outside > 0);
}

TEST_CASE("joint vectors strictly outside a single limit are invalid") {
  Rng rng(14);
  for (int i = 0; i < 4000; ++i) {
    JointVector4 q = random_in_limits(rng);
    const double e = rng.uniform(0.01, 0.2);
    switch (i % 6) {
      case 0: q.q2 = kLimits.q2.upper + e; break;
      case 1: q.q2 = kLimits.q2.lower - e; break;
      case 2: q.q3 = kLimits.q3.upper + 0.1 * e; break;
      case 3: q.q4 = kLimits.q4.upper + e; break;
      case 4: q.q4 = kLimits.q4.lower - e; break;
      case 5: q.q1 = kLimits.q1.upper + e; q.q2 = std::max(q.q2, 0.1); break;
    }
    CHECK_FALSE(validate_pose(forward_kinematics(q), kBounds, kZero, kLimits).valid);
  }
}

TEST_CASE("validity is monotone in the buffer") {
  Rng rng(15);
  for (int i = 0; i < 5000; ++i) {
    const Transform t(forward_kinematics(random_in_limits(rng)).rotation(),
                      Vec3(rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.02)));
    const Buffer b{rng.uniform(0, 0.03), rng.uniform(0, 0.3)};
    const Buffer smaller{b.linear * rng.uniform(), b.angular * rng.uniform()};
    if (validate_pose(t, kBounds, b, kLimits).valid) CHECK(validate_pose(t, kBounds, smaller, kLimits).valid);
    const Verdict v = validate_pose(t, kBounds, b, kLimits);
    if (v.valid) CHECK(v.min_signed_distance >= b.linear - kBoundaryTolerance);
  }
}

TEST_CASE("min signed distance is continuous along rays") {
  Rng rng(16);
  const double step = 1e-4;
  for (int ray = 0; ray < 200; ++ray) {
    const Vec3 origin(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(-0.2, 0.0));
    const Vec3 dir = Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
    double prev = classify_position(origin, kBounds, kZero).min_signed_distance;
    for (int s = 1; s <= 1000; ++s) {
      const Vec3 p = origin + dir * (step * s);
      const double cur = classify_position(p, kBounds, kZero).min_signed_distance;
      CHECK(std::abs(cur - prev) <= 2 * step);
      prev = cur;
    }
  }
}

TEST_CASE("validate_poses matches the per-pose verdict") {
  Rng rng(17);
  std::vector<Transform> poses;
  for (int i = 0; i < 3000; ++i) {
    const Transform t = forward_kinematics(random_in_limits(rng));
    poses.emplace_back(t.rotation(), t.translation() * rng.uniform(0.5, 1.5));
  }
  const Buffer b = Buffer::defaults();
  const auto ok = validate_poses(poses, kBounds, b, kLimits);
  REQUIRE(ok.size() == poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) CHECK(bool(ok[i]) == validate_pose(poses[i], kBounds, b, kLimits).valid);
}

TEST_CASE("buffer feasibility") {
  CHECK_NOTHROW(check_buffer_feasible(kBounds, kLimits, Buffer::defaults()));
  CHECK_THROWS_AS(check_buffer_feasible(kBounds, kLimits, {0.2, 0.0}), ConfigError);
  CHECK_THROWS_AS(check_buffer_feasible(kBounds, kLimits, {0.0, 1.6}), ConfigError);
  CHECK_THROWS_AS(check_buffer_feasible(kBounds, kLimits, {-0.001, 0.0}), ConfigError);
}

TEST_CASE("to_rcm_frame") {
  const RcmConfig id{Transform::identity()};
  const Transform pose = forward_kinematics({0.2, 0.1, 0.05, 0.3});
  CHECK(to_rcm_frame(pose, id) == pose);

  const RcmConfig up{Transform::translate(0, 0, 0.5)};
  CHECK(to_rcm_frame(Transform::translate(0, 0, 0.5), up).translation().norm() == 0.0);

  Rng rng(18);
  for (int i = 0; i < 100; ++i) {
    const Transform cfg(forward_kinematics(random_in_limits(rng)).rotation(),
                        Vec3(rng.normal(), rng.normal(), rng.normal()));
    const Transform p(forward_kinematics(random_in_limits(rng)).rotation(), Vec3(rng.normal(), rng.normal(), rng.normal()));
    const Mat4 expected = cfg.matrix().inverse() * p.matrix();
    CHECK((to_rcm_frame(p, {cfg}).matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("surface names") {
  CHECK(surface_name(Surface::InnerSphere) == "inner_sphere");
  CHECK(surface_name(Surface::UpperPlane) == "upper_plane");
}
