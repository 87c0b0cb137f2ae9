#include "ecmlfd/ecm_kinematics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ecmlfd/errors.hpp"

namespace ecmlfd {

namespace {

constexpr double kPi = std::numbers::pi;

void check_interval(const Interval& i, const char* name) {
  if (!(i.lower < i.upper)) {
    throw ConfigError(std::string("joint limits for ") + name + " need lower < upper");
  }
}

bool shrunk_contains(const Interval& i, double buffer, double v, const char* name) {
  if (!(buffer >= 0.0)) throw std::invalid_argument("buffers must be non-negative");
  if (2.0 * buffer > i.width()) {
    throw std::invalid_argument(std::string("buffer empties the ") + name + " interval");
  }
  return v >= i.lower + buffer && v <= i.upper - buffer;
}

}  // namespace

void JointLimits::validate() const {
  check_interval(q1, "q1");
  check_interval(q2, "q2");
  check_interval(q3, "q3");
  check_interval(q4, "q4");
}

std::array<DhRow, 4> EcmDhTable::default_rows() {
  return {{
      {JointKind::Revolute, 0.0, kPi / 2, 0.0, kPi / 2},
      {JointKind::Revolute, 0.0, -kPi / 2, 0.0, -kPi / 2},
      {JointKind::Prismatic, -0.3822, 0.0, 0.0, kPi / 2},
      {JointKind::Revolute, 0.3829, 0.0, 0.0, 0.0},
  }};
}

void EcmDhTable::validate() const {
  const auto ref = default_rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const DhRow& r = rows[i];
    const DhRow& e = ref[i];
    const bool fixed_ok = r.kind == e.kind && std::abs(r.a - e.a) <= 1e-12 &&
                          std::abs(r.theta - e.theta) <= 1e-12 &&
                          std::abs(r.alpha - e.alpha) <= 1e-12;
    const bool d_ok = i >= 2 || std::abs(r.d - e.d) <= 1e-12;
    if (!fixed_ok || !d_ok) {
      throw ConfigError("DH row " + std::to_string(i + 1) +
                        " deviates from the RRPR structure the closed-form kinematics assume");
    }
  }
  if (!std::isfinite(rows[2].d) || !std::isfinite(rows[3].d)) {
    throw ConfigError("DH offsets must be finite");
  }
}

Transform forward_kinematics(const JointVector4& q, const EcmDhTable& dh) {
  const double c1 = std::cos(q.q1), s1 = std::sin(q.q1);
  const double c2 = std::cos(q.q2), s2 = std::sin(q.q2);
  const double c4 = std::cos(q.q4), s4 = std::sin(q.q4);
  const double r = q.q3 + dh.radial_offset();
  Mat3 rot;
  rot << -c1 * s4 - c4 * s1 * s2, s1 * s2 * s4 - c1 * c4, c2 * s1,
         -c2 * c4, c2 * s4, -s2,
         c1 * c4 * s2 - s1 * s4, -c4 * s1 - c1 * s2 * s4, -c1 * c2;
  return {Rotation3::from_matrix(rot, 1e-12), Vec3(c2 * s1 * r, -s2 * r, -c1 * c2 * r)};
}

Transform forward_kinematics_chain(const JointVector4& q, const EcmDhTable& dh) {
  const std::array<double, 4> joints{q.q1, q.q2, q.q3, q.q4};
  Transform out;
  for (std::size_t i = 0; i < 4; ++i) out = out * dh_transform(dh.rows[i], joints[i]);
  return out;
}

DirectionAngles solve_direction(const Vec3& p, double q1_upper) {
  const double p1 = p.x(), p2 = p.y(), p3 = p.z();
  if (!p.allFinite()) throw UnreachableError("position is not finite");
  DirectionAngles out;
  if (std::abs(p3) >= kAxisTolerance) {
    out.q1 = std::atan(-p1 / p3);
    // atan only returns the branch with cos(q1) > 0, i.e. p3 < 0. The q1
    // limits extend a few microradians past ±π/2, so points just above the
    // z = 0 plane are reachable on the other branch.
    if (p3 > 0.0) out.q1 += p1 >= 0.0 ? kPi : -kPi;
    out.q2 = std::atan(p2 / p3 * std::cos(out.q1));
  } else if (p1 != 0.0) {
    out.q1 = (p1 > 0.0 ? 1.0 : -1.0) * q1_upper;
    out.q2 = std::atan(-p2 / p1 * std::sin(out.q1));
  } else {
    throw UnreachableError("position lies outside the reachable workspace");
  }
  return out;
}

PositionJoints solve_position(const Vec3& p, const EcmDhTable& dh, const JointLimits& limits) {
  const DirectionAngles dir = solve_direction(p, limits.q1.upper);
  return {dir.q1, dir.q2, p.norm() - dh.radial_offset()};
}

double solve_roll(const Rotation3& r) { return std::atan2(r(1, 1), -r(1, 0)); }

JointVector4 inverse_kinematics(const Transform& pose, const EcmDhTable& dh,
                                const JointLimits& limits) {
  const PositionJoints pj = solve_position(pose.translation(), dh, limits);
  return {pj.q1, pj.q2, pj.q3, solve_roll(pose.rotation())};
}

bool within_limits(const JointVector4& q, const JointLimits& limits, double angular_buffer,
                   double linear_buffer) {
  // Evaluate all four so that an infeasible buffer is reported even when an
  // earlier joint already fails.
  const bool ok1 = shrunk_contains(limits.q1, angular_buffer, q.q1, "q1");
  const bool ok2 = shrunk_contains(limits.q2, angular_buffer, q.q2, "q2");
  const bool ok3 = shrunk_contains(limits.q3, linear_buffer, q.q3, "q3");
  const bool ok4 = shrunk_contains(limits.q4, angular_buffer, q.q4, "q4");
  return ok1 && ok2 && ok3 && ok4;
}

}  // namespace ecmlfd
