#pragma once

#include <Eigen/Core>
#include <array>
#include <span>

namespace ecmlfd {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Proper rotation matrix. Instances built through from_matrix() are
/// orthonormal with det +1; products of valid rotations are not re-checked.
class Rotation3 {
 public:
  Rotation3() : m_(Mat3::Identity()) {}

  /// Throws std::invalid_argument if `m` is further than `tol` from SO(3)
  /// (max abs entry of RᵀR − I, or |det − 1|).
  static Rotation3 from_matrix(const Mat3& m, double tol = 1e-6);
  static Rotation3 from_row_major(std::span<const double, 9> v, double tol = 1e-6);
  static Rotation3 about_x(double angle);
  static Rotation3 about_y(double angle);
  static Rotation3 about_z(double angle);

  const Mat3& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }
  std::array<double, 9> row_major() const;

  Rotation3 transpose() const { return Rotation3(m_.transpose()); }
  Rotation3 operator*(const Rotation3& rhs) const { return Rotation3(m_ * rhs.m_); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  bool operator==(const Rotation3& rhs) const { return m_ == rhs.m_; }

  /// Max abs deviation of RᵀR from identity.
  double orthonormality_error() const;

 private:
  explicit Rotation3(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

/// Unit quaternion with components ordered (w, x, y, z).
class UnitQuaternion {
 public:
  UnitQuaternion() = default;

  /// Normalizes (w, x, y, z). Throws std::invalid_argument on a zero or
  /// non-finite vector. Hemisphere is left as given.
  static UnitQuaternion normalized(double w, double x, double y, double z);
  /// Normalizes and flips into the canonical hemisphere.
  static UnitQuaternion canonical(double w, double x, double y, double z);

  double w() const { return w_; }
  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  std::array<double, 4> components() const { return {w_, x_, y_, z_}; }

  /// w > 0, or w == 0 and the first nonzero of (x, y, z) is positive.
  bool is_canonical() const;
  UnitQuaternion canonicalized() const;
  UnitQuaternion negated() const { return {-w_, -x_, -y_, -z_}; }
  double dot(const UnitQuaternion& o) const {
    return w_ * o.w_ + x_ * o.x_ + y_ * o.y_ + z_ * o.z_;
  }
  bool operator==(const UnitQuaternion&) const = default;

 private:
  UnitQuaternion(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {}
  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

/// Rigid-body transform acting on points as p' = R·p + t.
class Transform {
 public:
  Transform() : translation_(Vec3::Zero()) {}
  Transform(const Rotation3& r, const Vec3& t) : rotation_(r), translation_(t) {}

  static Transform identity() { return {}; }
  static Transform translate(double x, double y, double z) { return {Rotation3(), Vec3(x, y, z)}; }
  /// Throws std::invalid_argument if the bottom row is not (0 0 0 1) or the
  /// rotation block is not a rotation within `tol`.
  static Transform from_matrix(const Mat4& m, double tol = 1e-6);

  const Rotation3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat4 matrix() const;

  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }
  Transform operator*(const Transform& rhs) const {
    return {rotation_ * rhs.rotation_, rotation_ * rhs.translation_ + translation_};
  }
  bool operator==(const Transform&) const = default;

 private:
  Rotation3 rotation_;
  Vec3 translation_;
};

enum class JointKind { Revolute, Prismatic };

/// One row of a modified (proximal) Denavit-Hartenberg table.
struct DhRow {
  JointKind kind = JointKind::Revolute;
  double d = 0.0;      // m, along current z
  double theta = 0.0;  // rad, about current z
  double a = 0.0;      // m, along current x
  double alpha = 0.0;  // rad, about current x
};

/// Modified-DH transform from frame i−1 to frame i with joint variable q
/// added to theta (revolute) or d (prismatic).
Transform dh_transform(const DhRow& row, double q);

/// Left-to-right product. Throws std::invalid_argument for an empty chain.
Transform compose(std::span<const Transform> chain);
Transform compose(std::initializer_list<Transform> chain);

/// (Rᵀ, −Rᵀt).
Transform invert(const Transform& t);

/// Canonical-hemisphere quaternion of a rotation (Shepperd's method).
UnitQuaternion to_quaternion(const Rotation3& r);
/// Validating overload: throws std::invalid_argument if `m` is not
/// orthonormal within 1e-6.
UnitQuaternion to_quaternion(const Mat3& m);
Rotation3 to_rotation(const UnitQuaternion& q);

/// Geodesic angle between two orientations, in [0, π]; invariant under
/// q → −q.
double quat_angle(const UnitQuaternion& a, const UnitQuaternion& b);

struct ToolTips {
  Transform psm1_tip;
  Transform psm2_tip;
  Transform ecm_tip;
};

/// Tool-tip and camera-tip poses in the robot base frame. Naming follows
/// "x_y" = pose of frame y expressed in frame x. The camera chain multiplies
/// eb_rb · et_eb in that order.
ToolTips tool_tips_in_base(const Transform& rb_pb1, const Transform& pb1_pt1,
                           const Transform& rb_pb2, const Transform& pb2_pt2,
                           const Transform& eb_rb, const Transform& et_eb);

/// Tool tip seen from the camera tip: et_eb · eb_rb · rb_pb · pb_pt.
Transform psm_tip_in_ecm_frame(const Transform& et_eb, const Transform& eb_rb,
                               const Transform& rb_pb, const Transform& pb_pt);

constexpr double deg_to_rad(double deg) { return deg * 0.017453292519943295769; }
constexpr double rad_to_deg(double rad) { return rad * 57.295779513082320877; }

}  // namespace ecmlfd
