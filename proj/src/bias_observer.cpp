#include "seobs/bias_observer.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace seobs {

void AntiWindupConfig::validate() const {
  for (double v : {k_b, kappa_angular, kappa_linear, delta_angular, delta_linear}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("AntiWindupConfig: all parameters must be positive");
    }
  }
}

std::string to_string(BiasLaw law) {
  switch (law) {
    case BiasLaw::None:
      return "none";
    case BiasLaw::Proposition1:
      return "proposition1";
    case BiasLaw::Decomposed:
      return "decomposed";
    case BiasLaw::AntiWindup:
      return "antiwindup";
  }
  return "antiwindup";
}

std::optional<BiasLaw> parse_bias_law(const std::string& name) {
  if (name == "none") return BiasLaw::None;
  if (name == "proposition1") return BiasLaw::Proposition1;
  if (name == "decomposed") return BiasLaw::Decomposed;
  if (name == "antiwindup") return BiasLaw::AntiWindup;
  return std::nullopt;
}

Vector3 sat(const Vector3& x, double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("sat: radius must be positive");
  }
  const double n = x.norm();
  if (n <= delta) {
    return x;
  }
  return x * (delta / n);
}

Twist bias_derivative_projection(const Pose& xhat, const MeasurementSet& m, double k_b) {
  const Matrix4 x = xhat.matrix();
  const Matrix4 x_inv_t = xhat.inverse().matrix().transpose();
  return -k_b * project_se3(x.transpose() * innovation_sum(xhat, m) * x_inv_t);
}

BiasState bias_derivative_decomposed(const Pose& xhat, const MeasurementSet& m, double k_b) {
  const Innovation delta = innovation_matrix_form(xhat, m);
  const Matrix3 rt = xhat.rotation().transpose();
  return {k_b * rt * (delta.angular + 0.5 * delta.linear.cross(xhat.position())),
          k_b * rt * delta.linear};
}

BiasState bias_derivative_antiwindup(const Pose& xhat, const MeasurementSet& m, const BiasState& b,
                                     const AntiWindupConfig& cfg) {
  BiasState d = bias_derivative_decomposed(xhat, m, cfg.k_b);
  d.angular -= cfg.kappa_angular * (b.angular - sat(b.angular, cfg.delta_angular));
  d.linear -= cfg.kappa_linear * (b.linear - sat(b.linear, cfg.delta_linear));
  return d;
}

BiasState bias_derivative(BiasLaw law, const Pose& xhat, const MeasurementSet& m,
                          const BiasState& b, const AntiWindupConfig& cfg) {
  switch (law) {
    case BiasLaw::None:
      return {};
    case BiasLaw::Proposition1:
      return BiasState::FromTwist(bias_derivative_projection(xhat, m, cfg.k_b));
    case BiasLaw::Decomposed:
      return bias_derivative_decomposed(xhat, m, cfg.k_b);
    case BiasLaw::AntiWindup:
      return bias_derivative_antiwindup(xhat, m, b, cfg);
  }
  return {};
}

std::pair<ObserverState, BiasState> step_biased(const ObserverState& s, const BiasState& b,
                                                const Twist& a_measured, const MeasurementSet& m,
                                                const AntiWindupConfig& cfg, double dt,
                                                BiasLaw law) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step_biased: dt must be positive");
  }
  const Innovation delta = innovation(s.estimate, m);
  const BiasState db = bias_derivative(law, s.estimate, m, b, cfg);
  ObserverState next = step_with_innovation(s, a_measured - b.asTwist(), delta, dt);
  return {next, b + db * dt};
}

double lyapunov_value(const Pose& e, const BiasState& b_tilde, const ReferenceSet& refs,
                      double k_b) {
  if (!(k_b > 0.0)) {
    throw std::invalid_argument("lyapunov_value: k_b must be positive");
  }
  const double bias_sq = 2.0 * b_tilde.angular.squaredNorm() + b_tilde.linear.squaredNorm();
  return error_cost(e, refs) + bias_sq / (2.0 * k_b);
}

namespace {

double condition_number(const Matrix3& m) {
  Eigen::JacobiSVD<Matrix3> svd(m);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0) || !(s(2) > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return s(0) / s(2);
}

}  // namespace

ObservabilityMatrices observability_matrices_a2(const ReferenceSet& refs) {
  if (refs.empty()) {
    throw std::invalid_argument("observability_matrices_a2: empty reference set");
  }
  ObservabilityMatrices out;
  Matrix3 l = Matrix3::Zero();
  Matrix3 d = Matrix3::Zero();
  for (const auto& r : refs) {
    const Vector3 yu = r.point.underline();
    const double w = r.point.w();
    const Matrix3 yx = hat3(yu);
    out.g += r.gain * yx * yx;
    l += r.gain * w * yx;
    d += r.gain * w * w * (Matrix3::Identity() - yu * yu.transpose());
  }
  out.cond_g = condition_number(out.g);
  if (!(out.cond_g < kMaxConditionNumber)) {
    out.cond_h = std::numeric_limits<double>::infinity();
    out.diagnostic = "G is singular; H is undefined";
    return out;
  }
  out.h = l * out.g.inverse() * l - d;
  out.cond_h = condition_number(*out.h);
  if (!(out.cond_h < kMaxConditionNumber)) {
    out.diagnostic = "H is singular";
    return out;
  }
  out.full_rank = true;
  return out;
}

}  // namespace seobs
