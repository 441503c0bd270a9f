#pragma once

// Random generators for property checks.

#include <random>

#include "seobs/liealg.hpp"
#include "seobs/projective.hpp"

namespace seobs {

/// Haar-uniform rotation (normalized Gaussian quaternion).
Matrix3 random_rotation(std::mt19937_64& rng);
/// Uniform rotation and a position with i.i.d. N(0, position_scale^2) entries.
Pose random_pose(std::mt19937_64& rng, double position_scale = 1.0);
Twist random_twist(std::mt19937_64& rng, double scale = 1.0);
Vector3 random_vector(std::mt19937_64& rng, double scale = 1.0);

/// n references mixing feature points (|p| up to ~3 m) and unit directions,
/// gains uniform in [0.5, 3].
ReferenceSet random_reference_set(std::mt19937_64& rng, std::size_t n);

/// Random references measured from a random true pose.
MeasurementSet random_measurements(std::mt19937_64& rng, std::size_t n);

}  // namespace seobs
