#include "ecmlfd/se3.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ecmlfd {

namespace {

double so3_error(const Mat3& m) {
  const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(m.determinant() - 1.0));
}

}  // namespace

Rotation3 Rotation3::from_matrix(const Mat3& m, double tol) {
  if (!m.allFinite()) throw std::invalid_argument("rotation matrix has non-finite entries");
  const double err = so3_error(m);
  if (!(err <= tol)) {
    throw std::invalid_argument("matrix is not a proper rotation (deviation " +
                                std::to_string(err) + ")");
  }
  return Rotation3(m);
}

Rotation3 Rotation3::from_row_major(std::span<const double, 9> v, double tol) {
  Mat3 m;
  m << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
  return from_matrix(m, tol);
}

Rotation3 Rotation3::about_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return Rotation3(m);
}

Rotation3 Rotation3::about_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return Rotation3(m);
}

Rotation3 Rotation3::about_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return Rotation3(m);
}

std::array<double, 9> Rotation3::row_major() const {
  return {m_(0, 0), m_(0, 1), m_(0, 2), m_(1, 0), m_(1, 1), m_(1, 2), m_(2, 0), m_(2, 1), m_(2, 2)};
}

double Rotation3::orthonormality_error() const {
  return (m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff();
}

UnitQuaternion UnitQuaternion::normalized(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n == 0.0) {
    throw std::invalid_argument("cannot normalize a zero or non-finite quaternion");
  }
  return {w / n, x / n, y / n, z / n};
}

UnitQuaternion UnitQuaternion::canonical(double w, double x, double y, double z) {
  return normalized(w, x, y, z).canonicalized();
}

bool UnitQuaternion::is_canonical() const {
  if (w_ != 0.0) return w_ > 0.0;
  if (x_ != 0.0) return x_ > 0.0;
  if (y_ != 0.0) return y_ > 0.0;
  return z_ > 0.0;
}

UnitQuaternion UnitQuaternion::canonicalized() const {
  return is_canonical() ? *this : negated();
}

Mat4 Transform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_.matrix();
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Transform Transform::from_matrix(const Mat4& m, double tol) {
  if (m(3, 0) != 0.0 || m(3, 1) != 0.0 || m(3, 2) != 0.0 || m(3, 3) != 1.0) {
    throw std::invalid_argument("homogeneous matrix bottom row must be (0 0 0 1)");
  }
  return {Rotation3::from_matrix(m.topLeftCorner<3, 3>(), tol), m.topRightCorner<3, 1>()};
}

Transform dh_transform(const DhRow& row, double q) {
  const double theta = row.kind == JointKind::Revolute ? row.theta + q : row.theta;
  const double d = row.kind == JointKind::Prismatic ? row.d + q : row.d;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Mat4 m;
  m << ct, -st, 0.0, row.a,
       st * ca, ct * ca, -sa, -d * sa,
       st * sa, ct * sa, ca, d * ca,
       0.0, 0.0, 0.0, 1.0;
  return Transform::from_matrix(m, 1e-12);
}

Transform compose(std::span<const Transform> chain) {
  if (chain.empty()) throw std::invalid_argument("compose: empty transform chain");
  Transform out = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) out = out * chain[i];
  return out;
}

Transform compose(std::initializer_list<Transform> chain) {
  return compose(std::span<const Transform>(chain.begin(), chain.size()));
}

Transform invert(const Transform& t) {
  const Rotation3 rt = t.rotation().transpose();
  return {rt, -(rt * t.translation())};
}

UnitQuaternion to_quaternion(const Rotation3& r) {
  const Mat3& m = r.matrix();
  const double trace = m.trace();
  double w, x, y, z;
  // Shepperd: branch on the largest of (w², x², y², z²) to avoid
  // cancellation.
  if (trace >= m(0, 0) && trace >= m(1, 1) && trace >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + trace);
    w = 0.25 * s;
    x = (m(2, 1) - m(1, 2)) / s;
    y = (m(0, 2) - m(2, 0)) / s;
    z = (m(1, 0) - m(0, 1)) / s;
  } else if (m(0, 0) >= m(1, 1) && m(0, 0) >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2));
    w = (m(2, 1) - m(1, 2)) / s;
    x = 0.25 * s;
    y = (m(0, 1) + m(1, 0)) / s;
    z = (m(0, 2) + m(2, 0)) / s;
  } else if (m(1, 1) >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2));
    w = (m(0, 2) - m(2, 0)) / s;
    x = (m(0, 1) + m(1, 0)) / s;
    y = 0.25 * s;
    z = (m(1, 2) + m(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1));
    w = (m(1, 0) - m(0, 1)) / s;
    x = (m(0, 2) + m(2, 0)) / s;
    y = (m(1, 2) + m(2, 1)) / s;
    z = 0.25 * s;
  }
  return UnitQuaternion::canonical(w, x, y, z);
}

UnitQuaternion to_quaternion(const Mat3& m) {
  return to_quaternion(Rotation3::from_matrix(m, 1e-6));
}

Rotation3 to_rotation(const UnitQuaternion& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat3 m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return Rotation3::from_matrix(m, 1e-6);
}

double quat_angle(const UnitQuaternion& a, const UnitQuaternion& b) {
  // Relative rotation a⁻¹·b; atan2 form stays accurate near 0 and π.
  const double w = a.w() * b.w() + a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
  const double x = a.w() * b.x() - a.x() * b.w() - a.y() * b.z() + a.z() * b.y();
  const double y = a.w() * b.y() + a.x() * b.z() - a.y() * b.w() - a.z() * b.x();
  const double z = a.w() * b.z() - a.x() * b.y() + a.y() * b.x() - a.z() * b.w();
  const double v = std::sqrt(x * x + y * y + z * z);
  return 2.0 * std::atan2(v, std::abs(w));
}

ToolTips tool_tips_in_base(const Transform& rb_pb1, const Transform& pb1_pt1,
                           const Transform& rb_pb2, const Transform& pb2_pt2,
                           const Transform& eb_rb, const Transform& et_eb) {
  return {rb_pb1 * pb1_pt1, rb_pb2 * pb2_pt2, eb_rb * et_eb};
}

Transform psm_tip_in_ecm_frame(const Transform& et_eb, const Transform& eb_rb,
                               const Transform& rb_pb, const Transform& pb_pt) {
  return compose({et_eb, eb_rb, rb_pb, pb_pt});
}

}  // namespace ecmlfd
