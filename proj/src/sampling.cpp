#include "seobs/sampling.hpp"

namespace seobs {

Matrix3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  return q.toRotationMatrix();
}

Vector3 random_vector(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> gauss(0.0, scale);
  return {gauss(rng), gauss(rng), gauss(rng)};
}

Pose random_pose(std::mt19937_64& rng, double position_scale) {
  const Matrix3 r = random_rotation(rng);
  return {r, random_vector(rng, position_scale)};
}

Twist random_twist(std::mt19937_64& rng, double scale) {
  return {random_vector(rng, scale), random_vector(rng, scale)};
}

ReferenceSet random_reference_set(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution is_point(0.5);
  std::uniform_real_distribution<double> gain(0.5, 3.0);
  ReferenceSet refs;
  refs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_point(rng)) {
      refs.push_back({embed_point(random_vector(rng, 1.5)), gain(rng)});
    } else {
      Vector3 v = random_vector(rng);
      while (v.norm() < 1e-3) {
        v = random_vector(rng);
      }
      refs.push_back({embed_vector(v), gain(rng)});
    }
  }
  return refs;
}

MeasurementSet random_measurements(std::mt19937_64& rng, std::size_t n) {
  const ReferenceSet refs = random_reference_set(rng, n);
  return measure(random_pose(rng), refs);
}

}  // namespace seobs
