#pragma once

// Pose observer with constant velocity-bias compensation.
//
//   d/dt Xhat = Xhat (A_y - bhat_A) - Delta(Xhat, Y) Xhat
//   d/dt bhat_A = -k_b P(Xhat^T S Xhat^{-T}),  S = sum k_i (I - e_i e_i^T) yref_i e_i^T
//
// In components (bhat_Omega, bhat_V) the bias law reads
//   d/dt bhat_Omega = k_b Rhat^T (Omega_Delta + 1/2 V_Delta x phat)
//   d/dt bhat_V     = k_b Rhat^T V_Delta
// and the anti-windup variant subtracts kappa (bhat - sat_delta(bhat)) from each.

#include <optional>
#include <string>
#include <utility>

#include "seobs/liealg.hpp"
#include "seobs/observer.hpp"
#include "seobs/projective.hpp"

namespace seobs {

struct BiasState {
  Vector3 angular = Vector3::Zero();  // rad/s
  Vector3 linear = Vector3::Zero();   // m/s

  static BiasState FromTwist(const Twist& t) { return {t.angular, t.linear}; }
  Twist asTwist() const { return {angular, linear}; }

  BiasState operator+(const BiasState& o) const { return {angular + o.angular, linear + o.linear}; }
  BiasState operator-(const BiasState& o) const { return {angular - o.angular, linear - o.linear}; }
  BiasState operator*(double s) const { return {angular * s, linear * s}; }
  bool allFinite() const { return angular.allFinite() && linear.allFinite(); }
};

struct AntiWindupConfig {
  double k_b = 1.0;
  double kappa_angular = 10.0;
  double kappa_linear = 10.0;
  double delta_angular = 0.052;
  double delta_linear = 0.346;

  /// Throws std::invalid_argument unless every field is positive and finite.
  void validate() const;
};

enum class BiasLaw {
  None,          // bias estimate frozen
  Proposition1,  // projection form
  Decomposed,    // (Omega_Delta, V_Delta) component form
  AntiWindup,    // component form with saturation leak
};

std::string to_string(BiasLaw law);
/// Accepts none | proposition1 | decomposed | antiwindup.
std::optional<BiasLaw> parse_bias_law(const std::string& name);

/// x min(1, delta / |x|). Throws std::invalid_argument for delta <= 0.
Vector3 sat(const Vector3& x, double delta);

Twist bias_derivative_projection(const Pose& xhat, const MeasurementSet& m, double k_b);
BiasState bias_derivative_decomposed(const Pose& xhat, const MeasurementSet& m, double k_b);
BiasState bias_derivative_antiwindup(const Pose& xhat, const MeasurementSet& m, const BiasState& b,
                                     const AntiWindupConfig& cfg);

/// Bias derivative selected by `law` (zero for BiasLaw::None).
BiasState bias_derivative(BiasLaw law, const Pose& xhat, const MeasurementSet& m,
                          const BiasState& b, const AntiWindupConfig& cfg);

/// Splitting step for the pose and explicit Euler for the bias.
std::pair<ObserverState, BiasState> step_biased(const ObserverState& s, const BiasState& b,
                                                const Twist& a_measured, const MeasurementSet& m,
                                                const AntiWindupConfig& cfg, double dt,
                                                BiasLaw law = BiasLaw::AntiWindup);

/// V_b = sum k_i/2 |E yref_i/|E yref_i| - yref_i|^2 + ||b_tilde||^2 / (2 k_b), with
/// ||b_tilde||^2 = 2 |b_Omega|^2 + |b_V|^2 (Frobenius norm of the se(3) matrix).
double lyapunov_value(const Pose& e, const BiasState& b_tilde, const ReferenceSet& refs,
                      double k_b);

struct ObservabilityMatrices {
  Matrix3 g = Matrix3::Zero();
  std::optional<Matrix3> h;  // undefined when G is singular
  double cond_g = 0.0;
  double cond_h = 0.0;
  bool full_rank = false;
  std::string diagnostic;
};

inline constexpr double kMaxConditionNumber = 1e9;

/// G = sum k_i (yu_i x)^2
/// H = L G^{-1} L - sum k_i w_i^2 (I - yu_i yu_i^T),  L = sum k_i w_i (yu_i x)
/// Throws std::invalid_argument on an empty set.
ObservabilityMatrices observability_matrices_a2(const ReferenceSet& refs);

}  // namespace seobs
