#pragma once

// Closed-form algebra on SO(3), SE(3) and se(3).
//
// Poses are kept as (R, p) pairs; the homogeneous 4x4 form
//
//     X = | R  p |
//         | 0  1 |
//
// is materialized on demand. A twist (Omega, V) stands for the se(3) matrix
//
//     A = | Omega_x  V |
//         |    0     0 |

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace seobs {

using Vector3 = Eigen::Vector3d;
using Vector4 = Eigen::Vector4d;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;

/// Tolerance used by vee maps when checking membership of so(3) / se(3).
inline constexpr double kAlgebraTolerance = 1e-9;

/// Below this rotation angle the Rodrigues coefficients switch to Taylor terms.
inline constexpr double kSmallAngle = 1e-7;

/// Orthonormality drift ||R^T R - I|| that triggers re-orthonormalization.
inline constexpr double kOrthonormalityDrift = 1e-9;

struct Twist {
  Vector3 angular = Vector3::Zero();
  Vector3 linear = Vector3::Zero();

  static Twist Zero() { return {}; }

  Twist operator+(const Twist& o) const { return {angular + o.angular, linear + o.linear}; }
  Twist operator-(const Twist& o) const { return {angular - o.angular, linear - o.linear}; }
  Twist operator-() const { return {-angular, -linear}; }
  Twist operator*(double s) const { return {angular * s, linear * s}; }
  friend Twist operator*(double s, const Twist& t) { return t * s; }

  bool isApprox(const Twist& o, double tol) const;
  bool allFinite() const { return angular.allFinite() && linear.allFinite(); }
};

class Pose {
 public:
  Pose() = default;
  Pose(const Matrix3& rotation, const Vector3& position);

  static Pose Identity() { return {}; }
  static Pose Translation(const Vector3& p) { return {Matrix3::Identity(), p}; }
  static Pose Rotation(const Matrix3& r) { return {r, Vector3::Zero()}; }
  /// Builds a pose from a homogeneous matrix; the last row must be [0 0 0 1]
  /// and the rotation block must be orthonormal with det +1 (within 1e-9).
  static Pose FromMatrix(const Matrix4& m);

  const Matrix3& rotation() const { return rotation_; }
  const Vector3& position() const { return position_; }

  Matrix4 matrix() const;
  Pose inverse() const;
  Pose operator*(const Pose& o) const;

  /// Homogeneous action X y on a 4-vector.
  Vector4 act(const Vector4& y) const;
  /// Homogeneous action X^{-1} y without forming the inverse.
  Vector4 actInverse(const Vector4& y) const;

  /// Copy with the rotation projected back onto SO(3) if drift exceeds
  /// kOrthonormalityDrift.
  Pose normalized() const;

  bool isValid(double tol = kAlgebraTolerance) const;
  bool isApprox(const Pose& o, double tol) const;

 private:
  Matrix3 rotation_ = Matrix3::Identity();
  Vector3 position_ = Vector3::Zero();
};

Matrix3 hat3(const Vector3& w);
/// Throws std::invalid_argument when ||M + M^T|| exceeds kAlgebraTolerance.
Vector3 vee3(const Matrix3& m);

Matrix4 hat_se3(const Twist& t);
/// Throws std::invalid_argument when m is not in se(3) within kAlgebraTolerance.
Twist vee_se3(const Matrix4& m);

Matrix3 exp_so3(const Vector3& w);
/// Left Jacobian of SO(3): I + (1-cos t)/t^2 W + (t - sin t)/t^3 W^2.
Matrix3 left_jacobian_so3(const Vector3& w);
Pose exp_se3(const Twist& t);

/// Orthogonal projection of R^{4x4} onto se(3) under the Frobenius inner
/// product: antisymmetric part of the top-left block, top-right column kept,
/// bottom row dropped.
Twist project_se3(const Matrix4& m);

/// tr(A^T B). Dimensions must match (std::invalid_argument otherwise).
double frobenius_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double frobenius_norm(const Eigen::MatrixXd& m);

/// <hat(a), hat(b)> = 2 Omega_a . Omega_b + V_a . V_b.
double twist_inner(const Twist& a, const Twist& b);
/// Frobenius norm of hat(t): sqrt(2 |Omega|^2 + |V|^2).
double twist_norm(const Twist& t);

/// Right-invariant metric on T_X SE(3): <A1 X, A2 X>_X := <A1, A2>.
/// Tangent vectors are given as 4x4 matrices at X.
double right_invariant_metric(const Pose& x, const Matrix4& tangent1, const Matrix4& tangent2);

/// Ad_X A = X A X^{-1}.
Twist adjoint(const Pose& x, const Twist& a);

Pose pose_inverse(const Pose& x);

/// Nearest rotation in the Frobenius sense (SVD polar factor, det +1).
Matrix3 orthonormalize(const Matrix3& r);

/// Rotation angle in [0, pi] of the axis-angle form of r.
double rotation_angle(const Matrix3& r);

}  // namespace seobs
