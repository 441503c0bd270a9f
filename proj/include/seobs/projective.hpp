#pragma once

// Elements of RP^3 held as unit representatives in R^4.
//
// Feature-point positions p embed as [p; 1] / sqrt(|p|^2 + 1) and physical
// directions v as [v / |v|; 0]. Both embeddings give a non-negative fourth
// component, and SE(3) acts on representatives without changing it.

#include <cmath>
#include <vector>

#include "seobs/liealg.hpp"

namespace seobs {

/// Fourth-component magnitude separating point-type from direction-type elements.
inline constexpr double kDirectionThreshold = 1e-9;

class ProjectivePoint {
 public:
  ProjectivePoint() : rep_(0.0, 0.0, 0.0, 1.0) {}
  /// Normalizes v; throws std::invalid_argument if |v| <= 1e-12.
  explicit ProjectivePoint(const Vector4& v);

  const Vector4& rep() const { return rep_; }
  Vector3 underline() const { return rep_.head<3>(); }
  double w() const { return rep_(3); }

  bool isDirection() const { return std::abs(rep_(3)) <= kDirectionThreshold; }

  /// Same line, opposite representative.
  ProjectivePoint flipped() const;

 private:
  Vector4 rep_;
};

struct Measurement {
  ProjectivePoint reference;  // known element in the inertial frame
  ProjectivePoint measured;   // body-frame observation
  double gain = 1.0;
};

struct WeightedPoint {
  ProjectivePoint point;
  double gain = 1.0;
};

using ReferenceSet = std::vector<WeightedPoint>;

/// Non-empty list of (reference, measurement, gain > 0) triples.
class MeasurementSet {
 public:
  explicit MeasurementSet(std::vector<Measurement> entries);

  const std::vector<Measurement>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  ReferenceSet references() const;

 private:
  std::vector<Measurement> entries_;
};

ProjectivePoint embed_point(const Vector3& p);
/// Throws std::invalid_argument for |v| <= 1e-12.
ProjectivePoint embed_vector(const Vector3& v);

/// h(X, y) = X^{-1} y / |X^{-1} y|.
ProjectivePoint output_map(const Pose& x, const ProjectivePoint& yref);
/// rho(Q, y) = Q^{-1} y / |Q^{-1} y|.
ProjectivePoint group_action_rho(const Pose& q, const ProjectivePoint& y);
/// phi(Q, X) = X Q.
Pose group_action_phi(const Pose& q, const Pose& x);
/// psi(Q, A) = Ad_{Q^{-1}} A.
Twist group_action_psi(const Pose& q, const Twist& a);

/// e = Xhat y / |Xhat y|, the estimate of the reference element.
ProjectivePoint output_error(const Pose& xhat, const ProjectivePoint& y);

/// underline / w; requires a point-type element (std::invalid_argument otherwise).
Vector3 extract_point(const ProjectivePoint& y);
/// underline; requires a direction-type element (std::invalid_argument otherwise).
Vector3 extract_direction(const ProjectivePoint& y);

/// Measurements y_i = h(X, yref_i) paired with their references.
MeasurementSet measure(const Pose& x, const ReferenceSet& refs);

/// rho applied to every measured element, references untouched.
MeasurementSet act_on_measurements(const Pose& q, const MeasurementSet& m);

}  // namespace seobs
