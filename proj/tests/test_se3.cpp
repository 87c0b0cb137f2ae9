#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ecmlfd/rng.hpp"
#include "ecmlfd/se3.hpp"
#include "oracles.hpp"

using namespace ecmlfd;

namespace {

Rotation3 random_rotation(Rng& rng) {
  // Uniform unit quaternion by normalizing a Gaussian 4-vector.
  return to_rotation(UnitQuaternion::normalized(rng.normal(), rng.normal(), rng.normal(), rng.normal()));
}

Transform random_transform(Rng& rng) {
  return {random_rotation(rng), Vec3(rng.normal(), rng.normal(), rng.normal())};
}

double max_abs(const Mat4& a, const Mat4& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("rotation validation rejects non-orthonormal matrices") {
  Mat3 m = Mat3::Identity();
  CHECK_NOTHROW(Rotation3::from_matrix(m));
  m(0, 1) = 1e-3;
  CHECK_THROWS_AS(Rotation3::from_matrix(m), std::invalid_argument);
  Mat3 reflect = Mat3::Identity();
  reflect(2, 2) = -1.0;
  CHECK_THROWS_AS(Rotation3::from_matrix(reflect), std::invalid_argument);
  CHECK_THROWS_AS(to_quaternion(reflect), std::invalid_argument);
}

TEST_CASE("row-major layout") {
  const std::array<double, 9> v{0, -1, 0, 1, 0, 0, 0, 0, 1};
  const Rotation3 r = Rotation3::from_row_major(v);
  CHECK(r(0, 1) == -1.0);
  CHECK(r(1, 0) == 1.0);
  CHECK(r.row_major() == v);
}

TEST_CASE("dh_transform examples") {
  SUBCASE("all-zero row is identity") {
    const Transform t = dh_transform({JointKind::Revolute, 0, 0, 0, 0}, 0.0);
    CHECK(max_abs(t.matrix(), Mat4::Identity()) == 0.0);
  }
  SUBCASE("prismatic row with joint offset") {
    const Transform t = dh_transform({JointKind::Prismatic, -0.3822, 0, 0, std::numbers::pi / 2}, 0.1);
    CHECK(std::abs(t.translation().x()) < 1e-15);
    CHECK(std::abs(t.translation().y() - 0.2822) < 1e-15);
    CHECK(std::abs(t.translation().z()) < 1e-15);
    // Rotation is Rx(π/2).
    CHECK((t.rotation().matrix() - Rotation3::about_x(std::numbers::pi / 2).matrix()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("first camera-arm row at zero") {
    const Transform t = dh_transform({JointKind::Revolute, 0, std::numbers::pi / 2, 0, std::numbers::pi / 2}, 0.0);
    Mat3 expected;
    expected << 0, -1, 0, 0, 0, -1, 1, 0, 0;
    CHECK((t.rotation().matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(t.translation().norm() == 0.0);
  }
  SUBCASE("matches the explicit four-factor product for random rows") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      const DhRow row{i % 2 ? JointKind::Prismatic : JointKind::Revolute, rng.normal(), rng.uniform(-3, 3),
                      rng.normal(), rng.uniform(-3, 3)};
      const double q = rng.normal();
      const Transform t = dh_transform(row, q);
      const bool rev = row.kind == JointKind::Revolute;
      const Mat4 ref = oracle::modified_dh(row.d + (rev ? 0 : q), row.theta + (rev ? q : 0), row.a, row.alpha);
      CHECK(max_abs(t.matrix(), ref) < 1e-12);
      CHECK(t.rotation().orthonormality_error() < 1e-12);
    }
  }
}

TEST_CASE("compose and invert") {
  Rng rng(11);
  CHECK_THROWS_AS(compose(std::span<const Transform>{}), std::invalid_argument);
  const Transform id = compose({Transform::identity(), Transform::identity(), Transform::identity()});
  CHECK(max_abs(id.matrix(), Mat4::Identity()) == 0.0);

  CHECK(invert(Transform::identity()) == Transform::identity());
  const Transform t = invert(Transform::translate(0, 0, 1));
  CHECK(t.translation() == Vec3(0, 0, -1));
  CHECK(t.rotation() == Rotation3());

  for (int i = 0; i < 200; ++i) {
    const Transform a = random_transform(rng), b = random_transform(rng), c = random_transform(rng),
                    d = random_transform(rng);
    CHECK(max_abs(compose({a, invert(a)}).matrix(), Mat4::Identity()) < 1e-12);
    CHECK(max_abs(invert(invert(a)).matrix(), a.matrix()) < 1e-12);
    const Mat4 brute = a.matrix() * b.matrix() * c.matrix() * d.matrix();
    CHECK(max_abs(compose({a, b, c, d}).matrix(), brute) < 1e-12);
    CHECK(max_abs(compose({a, compose({b, c})}).matrix(), compose({compose({a, b}), c}).matrix()) < 1e-12);
    const Vec3 p(rng.normal(), rng.normal(), rng.normal());
    const Eigen::Vector4d ph(p.x(), p.y(), p.z(), 1.0);
    CHECK((a.apply(p) - (a.matrix() * ph).head<3>()).norm() < 1e-12);
  }
}

TEST_CASE("Transform::from_matrix rejects bad bottom rows") {
  Mat4 m = Mat4::Identity();
  m(3, 0) = 0.1;
  CHECK_THROWS_AS(Transform::from_matrix(m), std::invalid_argument);
}

TEST_CASE("quaternion conversion") {
  SUBCASE("identity") {
    const UnitQuaternion q = to_quaternion(Rotation3());
    CHECK(q.components() == std::array<double, 4>{1, 0, 0, 0});
    CHECK(to_rotation(q) == Rotation3());
  }
  SUBCASE("90 degrees about z") {
    const UnitQuaternion q = to_quaternion(Rotation3::about_z(std::numbers::pi / 2));
    const double h = std::sqrt(0.5);
    CHECK(std::abs(q.w() - h) < 1e-15);
    CHECK(std::abs(q.x()) < 1e-15);
    CHECK(std::abs(q.y()) < 1e-15);
    CHECK(std::abs(q.z() - h) < 1e-15);
  }
  SUBCASE("random roundtrips are canonical and exact to 1e-9") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
      const Rotation3 r = random_rotation(rng);
      const UnitQuaternion q = to_quaternion(r);
      CHECK(q.is_canonical());
      CHECK(std::abs(std::hypot(std::hypot(q.w(), q.x()), std::hypot(q.y(), q.z())) - 1.0) < 1e-12);
      CHECK((to_rotation(q).matrix() - r.matrix()).cwiseAbs().maxCoeff() < 1e-9);
      const UnitQuaternion back = to_quaternion(to_rotation(q));
      CHECK(std::abs(back.dot(q) - 1.0) < 1e-9);
    }
  }
  SUBCASE("near-180-degree rotations") {
    for (const Vec3 axis : {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1).normalized()}) {
      const Eigen::AngleAxisd aa(std::numbers::pi - 1e-9, axis);
      const Rotation3 r = Rotation3::from_matrix(aa.toRotationMatrix());
      CHECK((to_rotation(to_quaternion(r)).matrix() - r.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("canonical hemisphere") {
  CHECK(UnitQuaternion::canonical(-1, 0, 0, 0).components() == std::array<double, 4>{1, 0, 0, 0});
  CHECK(UnitQuaternion::canonical(0, -1, 0, 0).components() == std::array<double, 4>{0, 1, 0, 0});
  CHECK(UnitQuaternion::canonical(0, 0, -2, 0).components() == std::array<double, 4>{0, 0, 1, 0});
  CHECK_FALSE(UnitQuaternion::normalized(0, 0, 0, -1).is_canonical());
  CHECK_THROWS_AS(UnitQuaternion::normalized(0, 0, 0, 0), std::invalid_argument);
  const UnitQuaternion q = UnitQuaternion::canonical(0.5, 0, 0, 0.5);
  CHECK(std::abs(q.w() - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(q.z() - std::sqrt(0.5)) < 1e-15);
}

TEST_CASE("quat_angle") {
  Rng rng(9);
  const UnitQuaternion id;
  const UnitQuaternion z90 = to_quaternion(Rotation3::about_z(std::numbers::pi / 2));
  CHECK(std::abs(quat_angle(id, z90) - std::numbers::pi / 2) < 1e-12);
  for (int i = 0; i < 500; ++i) {
    const UnitQuaternion a = to_quaternion(random_rotation(rng));
    const UnitQuaternion b = to_quaternion(random_rotation(rng));
    const UnitQuaternion c = to_quaternion(random_rotation(rng));
    CHECK(quat_angle(a, a) < 1e-7);
    CHECK(quat_angle(a, a.negated()) < 1e-7);
    CHECK(quat_angle(a, b) == doctest::Approx(quat_angle(b, a)).epsilon(1e-12));
    CHECK(quat_angle(a, b) >= 0.0);
    CHECK(quat_angle(a, b) <= std::numbers::pi + 1e-12);
    CHECK(quat_angle(a, c) <= quat_angle(a, b) + quat_angle(b, c) + 1e-9);
    // Direct oracle: 2·acos(|<a,b>|).
    const double direct = 2.0 * std::acos(std::min(1.0, std::abs(a.dot(b))));
    CHECK(std::abs(quat_angle(a, b) - direct) < 1e-6);
    // Geodesic angle equals the rotation angle of Raᵀ Rb.
    const Mat3 rel = to_rotation(a).matrix().transpose() * to_rotation(b).matrix();
    const double trace_angle = std::acos(std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0));
    CHECK(std::abs(quat_angle(a, b) - trace_angle) < 1e-6);
  }
}

TEST_CASE("frame chains") {
  const Transform I;
  SUBCASE("identities") {
    const ToolTips t = tool_tips_in_base(I, I, I, I, I, I);
    CHECK(t.psm1_tip == I);
    CHECK(t.psm2_tip == I);
    CHECK(t.ecm_tip == I);
    CHECK(psm_tip_in_ecm_frame(I, I, I, I) == I);
  }
  SUBCASE("single translations") {
    const ToolTips t = tool_tips_in_base(I, Transform::translate(0, 0, 0.1), I, I, I, I);
    CHECK(t.psm1_tip == Transform::translate(0, 0, 0.1));
    CHECK(t.psm2_tip == I);
    CHECK(psm_tip_in_ecm_frame(I, I, Transform::translate(1, 0, 0), I) == Transform::translate(1, 0, 0));
  }
  SUBCASE("random chains match matrix products") {
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
      Transform x[6];
      for (auto& t : x) t = random_transform(rng);
      const ToolTips t = tool_tips_in_base(x[0], x[1], x[2], x[3], x[4], x[5]);
      CHECK(max_abs(t.psm1_tip.matrix(), x[0].matrix() * x[1].matrix()) < 1e-12);
      CHECK(max_abs(t.psm2_tip.matrix(), x[2].matrix() * x[3].matrix()) < 1e-12);
      CHECK(max_abs(t.ecm_tip.matrix(), x[4].matrix() * x[5].matrix()) < 1e-12);
      const Transform e = psm_tip_in_ecm_frame(x[0], x[1], x[2], x[3]);
      CHECK(max_abs(e.matrix(), x[0].matrix() * x[1].matrix() * x[2].matrix() * x[3].matrix()) < 1e-12);
    }
  }
}

TEST_CASE("angle unit helpers") {
  CHECK(deg_to_rad(180.0) == doctest::Approx(std::numbers::pi));
  CHECK(rad_to_deg(std::numbers::pi / 2) == doctest::Approx(90.0));
}
