#include "seobs/liealg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seobs {

bool Twist::isApprox(const Twist& o, double tol) const {
  return (angular - o.angular).norm() <= tol && (linear - o.linear).norm() <= tol;
}

Pose::Pose(const Matrix3& rotation, const Vector3& position)
    : rotation_(rotation), position_(position) {}

Pose Pose::FromMatrix(const Matrix4& m) {
  if ((m.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).norm() > kAlgebraTolerance) {
    throw std::invalid_argument("Pose::FromMatrix: last row is not [0 0 0 1]");
  }
  Pose out(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
  if (!out.isValid()) {
    throw std::invalid_argument("Pose::FromMatrix: rotation block is not in SO(3)");
  }
  return out;
}

Matrix4 Pose::matrix() const {
  Matrix4 m = Matrix4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = position_;
  return m;
}

Pose Pose::inverse() const {
  const Matrix3 rt = rotation_.transpose();
  return {rt, -rt * position_};
}

Pose Pose::operator*(const Pose& o) const {
  return {rotation_ * o.rotation_, rotation_ * o.position_ + position_};
}

Vector4 Pose::act(const Vector4& y) const {
  Vector4 out;
  out.head<3>() = rotation_ * y.head<3>() + position_ * y(3);
  out(3) = y(3);
  return out;
}

Vector4 Pose::actInverse(const Vector4& y) const {
  Vector4 out;
  out.head<3>() = rotation_.transpose() * (y.head<3>() - position_ * y(3));
  out(3) = y(3);
  return out;
}

Pose Pose::normalized() const {
  const double drift = (rotation_.transpose() * rotation_ - Matrix3::Identity()).norm();
  if (drift <= kOrthonormalityDrift) {
    return *this;
  }
  return {orthonormalize(rotation_), position_};
}

bool Pose::isValid(double tol) const {
  if (!rotation_.allFinite() || !position_.allFinite()) {
    return false;
  }
  const Matrix3 gram = rotation_.transpose() * rotation_;
  if ((gram - Matrix3::Identity()).cwiseAbs().maxCoeff() > tol) {
    return false;
  }
  return std::abs(rotation_.determinant() - 1.0) <= tol;
}

bool Pose::isApprox(const Pose& o, double tol) const {
  return (matrix() - o.matrix()).cwiseAbs().maxCoeff() <= tol;
}

Matrix3 hat3(const Vector3& w) {
  Matrix3 m;
  // clang-format off
  m <<  0.0,  -w.z(),  w.y(),
        w.z(),  0.0,  -w.x(),
       -w.y(),  w.x(),  0.0;
  // clang-format on
  return m;
}

Vector3 vee3(const Matrix3& m) {
  if ((m + m.transpose()).norm() > kAlgebraTolerance) {
    throw std::invalid_argument("vee3: matrix is not antisymmetric");
  }
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1))};
}

Matrix4 hat_se3(const Twist& t) {
  Matrix4 m = Matrix4::Zero();
  m.topLeftCorner<3, 3>() = hat3(t.angular);
  m.topRightCorner<3, 1>() = t.linear;
  return m;
}

Twist vee_se3(const Matrix4& m) {
  if (m.row(3).norm() > kAlgebraTolerance) {
    throw std::invalid_argument("vee_se3: last row is not zero");
  }
  return {vee3(m.topLeftCorner<3, 3>()), m.topRightCorner<3, 1>()};
}

namespace {

// (1 - cos t) / t^2 without the cancellation in 1 - cos t.
double one_minus_cos_over_t2(double t) {
  const double s = std::sin(0.5 * t) / t;
  return 2.0 * s * s;
}

// (t - sin t) / t^3; the direct quotient loses most digits for small t.
double t_minus_sin_over_t3(double t) {
  if (t < 1e-2) {
    const double t2 = t * t;
    return 1.0 / 6.0 - t2 / 120.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0));
  }
  return (t - std::sin(t)) / (t * t * t);
}

}  // namespace

Matrix3 exp_so3(const Vector3& w) {
  const double theta = w.norm();
  const Matrix3 wx = hat3(w);
  if (theta < kSmallAngle) {
    return Matrix3::Identity() + wx + 0.5 * wx * wx;
  }
  const double a = std::sin(theta) / theta;
  return Matrix3::Identity() + a * wx + one_minus_cos_over_t2(theta) * wx * wx;
}

Matrix3 left_jacobian_so3(const Vector3& w) {
  const double theta = w.norm();
  const Matrix3 wx = hat3(w);
  if (theta < kSmallAngle) {
    return Matrix3::Identity() + 0.5 * wx + wx * wx / 6.0;
  }
  return Matrix3::Identity() + one_minus_cos_over_t2(theta) * wx +
         t_minus_sin_over_t3(theta) * wx * wx;
}

Pose exp_se3(const Twist& t) {
  return {exp_so3(t.angular), left_jacobian_so3(t.angular) * t.linear};
}

Twist project_se3(const Matrix4& m) {
  const Matrix3 block = m.topLeftCorner<3, 3>();
  const Matrix3 anti = 0.5 * (block - block.transpose());
  return {Vector3(anti(2, 1), anti(0, 2), anti(1, 0)), m.topRightCorner<3, 1>()};
}

double frobenius_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("frobenius_inner: dimension mismatch");
  }
  return (a.array() * b.array()).sum();
}

double frobenius_norm(const Eigen::MatrixXd& m) { return std::sqrt(frobenius_inner(m, m)); }

double twist_inner(const Twist& a, const Twist& b) {
  return 2.0 * a.angular.dot(b.angular) + a.linear.dot(b.linear);
}

double twist_norm(const Twist& t) { return std::sqrt(twist_inner(t, t)); }

double right_invariant_metric(const Pose& x, const Matrix4& tangent1, const Matrix4& tangent2) {
  const Matrix4 xinv = x.inverse().matrix();
  return frobenius_inner(tangent1 * xinv, tangent2 * xinv);
}

Twist adjoint(const Pose& x, const Twist& a) {
  // X hat(A) X^{-1} = [ (R w)_x , R v - (R w) x p ; 0 0 ]
  const Vector3 rw = x.rotation() * a.angular;
  return {rw, x.rotation() * a.linear - rw.cross(x.position())};
}

Pose pose_inverse(const Pose& x) { return x.inverse(); }

Matrix3 orthonormalize(const Matrix3& r) {
  Eigen::JacobiSVD<Matrix3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 u = svd.matrixU();
  const Matrix3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) {
    u.col(2) = -u.col(2);
  }
  return u * v.transpose();
}

double rotation_angle(const Matrix3& r) {
  // atan2 form of arccos((tr R - 1)/2); stays accurate near 0 and pi.
  const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  const Vector3 axis(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return std::atan2(0.5 * axis.norm(), c);
}

}  // namespace seobs
