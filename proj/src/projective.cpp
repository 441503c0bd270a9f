#include "seobs/projective.hpp"

#include <cmath>
#include <stdexcept>

namespace seobs {

namespace {

constexpr double kMinNorm = 1e-12;

}  // namespace

ProjectivePoint::ProjectivePoint(const Vector4& v) {
  const double n = v.norm();
  if (!(n > kMinNorm)) {
    throw std::invalid_argument("ProjectivePoint: representative has (near) zero norm");
  }
  rep_ = v / n;
}

ProjectivePoint ProjectivePoint::flipped() const {
  ProjectivePoint out = *this;
  out.rep_ = -rep_;
  return out;
}

MeasurementSet::MeasurementSet(std::vector<Measurement> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw std::invalid_argument("MeasurementSet: no measurements");
  }
  for (const auto& e : entries_) {
    if (!(e.gain > 0.0) || !std::isfinite(e.gain)) {
      throw std::invalid_argument("MeasurementSet: gains must be positive and finite");
    }
  }
}

ReferenceSet MeasurementSet::references() const {
  ReferenceSet refs;
  refs.reserve(entries_.size());
  for (const auto& e : entries_) {
    refs.push_back({e.reference, e.gain});
  }
  return refs;
}

ProjectivePoint embed_point(const Vector3& p) {
  Vector4 v;
  v << p, 1.0;
  return ProjectivePoint(v);
}

ProjectivePoint embed_vector(const Vector3& v) {
  const double n = v.norm();
  if (!(n > kMinNorm)) {
    throw std::invalid_argument("embed_vector: zero vector has no direction");
  }
  Vector4 rep;
  rep << v / n, 0.0;
  return ProjectivePoint(rep);
}

ProjectivePoint output_map(const Pose& x, const ProjectivePoint& yref) {
  return ProjectivePoint(x.actInverse(yref.rep()));
}

ProjectivePoint group_action_rho(const Pose& q, const ProjectivePoint& y) {
  return ProjectivePoint(q.actInverse(y.rep()));
}

Pose group_action_phi(const Pose& q, const Pose& x) { return x * q; }

Twist group_action_psi(const Pose& q, const Twist& a) { return adjoint(q.inverse(), a); }

ProjectivePoint output_error(const Pose& xhat, const ProjectivePoint& y) {
  return ProjectivePoint(xhat.act(y.rep()));
}

Vector3 extract_point(const ProjectivePoint& y) {
  if (!(y.w() > kDirectionThreshold)) {
    throw std::invalid_argument("extract_point: element is direction-type");
  }
  return y.underline() / y.w();
}

Vector3 extract_direction(const ProjectivePoint& y) {
  if (!y.isDirection()) {
    throw std::invalid_argument("extract_direction: element is point-type");
  }
  return y.underline();
}

MeasurementSet measure(const Pose& x, const ReferenceSet& refs) {
  std::vector<Measurement> entries;
  entries.reserve(refs.size());
  for (const auto& r : refs) {
    entries.push_back({r.point, output_map(x, r.point), r.gain});
  }
  return MeasurementSet(std::move(entries));
}

MeasurementSet act_on_measurements(const Pose& q, const MeasurementSet& m) {
  std::vector<Measurement> entries = m.entries();
  for (auto& e : entries) {
    e.measured = group_action_rho(q, e.measured);
  }
  return MeasurementSet(std::move(entries));
}

}  // namespace seobs
