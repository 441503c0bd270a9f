#pragma once

// Test-only reference computations, independent of the library code paths
// they are compared against.

#include <Eigen/Core>

#include <cmath>
#include <functional>

#include "seobs/liealg.hpp"

namespace seobs::oracle {

/// exp(M) by scaling and squaring with a 30-term Taylor series.
inline Eigen::Matrix4d matrix_exp(const Eigen::Matrix4d& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.25) {
    scaled *= 0.5;
    ++squarings;
  }
  const Eigen::Matrix4d a = m / std::pow(2.0, squarings);
  Eigen::Matrix4d term = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d sum = Eigen::Matrix4d::Identity();
  for (int k = 1; k <= 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) {
    sum = sum * sum;
  }
  return sum;
}

/// Central difference of f at 0.
inline double central_difference(const std::function<double(double)>& f, double h = 1e-6) {
  return (f(h) - f(-h)) / (2.0 * h);
}

/// se(3) element whose hat has unit entries at the k-th generator:
/// k = 0..2 angular axes, k = 3..5 linear axes.
inline Twist basis_twist(int k) {
  Twist t;
  if (k < 3) {
    t.angular(k) = 1.0;
  } else {
    t.linear(k - 3) = 1.0;
  }
  return t;
}

/// Reconstructs the right-invariant gradient of `cost_at` at x from six
/// directional central differences: <Delta, E_k> = 2 Omega_k (angular) and
/// V_k (linear).
inline Twist gradient_from_differences(const std::function<double(const Pose&)>& cost_at,
                                       const Pose& x, double h = 1e-6) {
  Twist g;
  for (int k = 0; k < 6; ++k) {
    const Twist u = basis_twist(k);
    const double d = central_difference(
        [&](double s) {
          const Eigen::Matrix4d step = matrix_exp(s * hat_se3(u));
          return cost_at(Pose(step.topLeftCorner<3, 3>(), step.topRightCorner<3, 1>()) * x);
        },
        h);
    if (k < 3) {
      g.angular(k) = 0.5 * d;
    } else {
      g.linear(k - 3) = d;
    }
  }
  return g;
}

}  // namespace seobs::oracle
