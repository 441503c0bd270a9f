#include "seobs/observer.hpp"

#include <algorithm>
#include <stdexcept>

namespace seobs {

double cost(const Pose& xhat, const MeasurementSet& m) {
  double c = 0.0;
  for (const auto& meas : m) {
    const ProjectivePoint e = output_error(xhat, meas.measured);
    c += 0.5 * meas.gain * (e.rep() - meas.reference.rep()).squaredNorm();
  }
  return c;
}

Matrix4 innovation_sum(const Pose& xhat, const MeasurementSet& m) {
  Matrix4 sum = Matrix4::Zero();
  for (const auto& meas : m) {
    const Vector4 e = output_error(xhat, meas.measured).rep();
    const Vector4& yref = meas.reference.rep();
    sum += meas.gain * (Matrix4::Identity() - e * e.transpose()) * yref * e.transpose();
  }
  return sum;
}

Innovation innovation(const Pose& xhat, const MeasurementSet& m) {
  return -project_se3(innovation_sum(xhat, m));
}

Innovation innovation_matrix_form(const Pose& xhat, const MeasurementSet& m) {
  Innovation delta;
  for (const auto& meas : m) {
    const ProjectivePoint e = output_error(xhat, meas.measured);
    const Vector3 eu = e.underline();
    const Vector3 yu = meas.reference.underline();
    const double align = e.rep().dot(meas.reference.rep());
    delta.angular += -0.5 * meas.gain * eu.cross(yu);
    delta.linear += meas.gain * e.w() * (align * eu - yu);
  }
  return delta;
}

Matrix4 observer_derivative(const ObserverState& s, const Twist& a, const MeasurementSet& m) {
  const Matrix4 x = s.estimate.matrix();
  return x * hat_se3(a) - hat_se3(innovation(s.estimate, m)) * x;
}

ObserverState step_with_innovation(const ObserverState& s, const Twist& a, const Innovation& delta,
                                   double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("observer step: dt must be positive");
  }
  const Pose next = exp_se3(-dt * delta) * s.estimate * exp_se3(dt * a);
  return {next.normalized()};
}

ObserverState step(const ObserverState& s, const Twist& a, const MeasurementSet& m, double dt) {
  return step_with_innovation(s, a, innovation(s.estimate, m), dt);
}

Pose group_error(const Pose& xhat, const Pose& x) { return xhat * x.inverse(); }

double error_cost(const Pose& e, const ReferenceSet& refs) {
  double c = 0.0;
  for (const auto& r : refs) {
    const ProjectivePoint ei = output_error(e, r.point);
    c += 0.5 * r.gain * (ei.rep() - r.point.rep()).squaredNorm();
  }
  return c;
}

std::string to_string(ObservabilityCase c) {
  switch (c) {
    case ObservabilityCase::Case1:
      return "Case 1";
    case ObservabilityCase::Case2:
      return "Case 2";
    case ObservabilityCase::Case3:
      return "Case 3";
    case ObservabilityCase::NotSatisfied:
      break;
  }
  return "NotSatisfied";
}

namespace {

// v_{ab} = w_b * u_a - w_a * u_b for point-type elements a, b.
Vector3 resultant(const ProjectivePoint& a, const ProjectivePoint& b) {
  return b.w() * a.underline() - a.w() * b.underline();
}

double cross_norm(const Vector3& a, const Vector3& b) { return a.cross(b).norm(); }

}  // namespace

ObservabilityReport check_observability_a1(const std::vector<ProjectivePoint>& refs) {
  if (refs.empty()) {
    throw std::invalid_argument("check_observability_a1: empty reference set");
  }
  std::vector<const ProjectivePoint*> directions;
  std::vector<const ProjectivePoint*> points;
  for (const auto& r : refs) {
    (r.isDirection() ? directions : points).push_back(&r);
  }

  auto finish = [](ObservabilityCase kind, double margin) {
    ObservabilityReport rep;
    rep.kind = kind;
    rep.margin = margin;
    rep.near_degenerate = margin < kNearDegenerateMargin;
    return rep;
  };

  // Case 1: two non-collinear directions and at least one point.
  if (!points.empty()) {
    double best = 0.0;
    for (std::size_t i = 0; i < directions.size(); ++i) {
      for (std::size_t j = i + 1; j < directions.size(); ++j) {
        best = std::max(best, cross_norm(directions[i]->underline(), directions[j]->underline()));
      }
    }
    if (best > kCollinearityTolerance) {
      return finish(ObservabilityCase::Case1, best);
    }
  }

  // Case 2: one direction and two points whose resultant is not collinear with it.
  {
    double best = 0.0;
    for (const auto* d : directions) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
          best = std::max(best, cross_norm(d->underline(), resultant(*points[i], *points[j])));
        }
      }
    }
    if (best > kCollinearityTolerance) {
      return finish(ObservabilityCase::Case2, best);
    }
  }

  // Case 3: three points whose pairwise resultants are not all collinear.
  {
    double best = 0.0;
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          const Vector3 v12 = resultant(*points[i], *points[j]);
          const Vector3 v23 = resultant(*points[j], *points[k]);
          const Vector3 v31 = resultant(*points[k], *points[i]);
          const double m =
              std::max({cross_norm(v12, v23), cross_norm(v23, v31), cross_norm(v31, v12)});
          best = std::max(best, m);
        }
      }
    }
    if (best > kCollinearityTolerance) {
      return finish(ObservabilityCase::Case3, best);
    }
  }

  ObservabilityReport rep;
  return rep;
}

}  // namespace seobs
