#pragma once

// Gradient-like pose observer on SE(3) driven by RP^3 outputs.
//
//   d/dt Xhat = Xhat A - Delta(Xhat, Y) Xhat
//
// Delta is the right-invariant Riemannian gradient of
//   C(Xhat, Y) = sum_i k_i/2 |Xhat y_i / |Xhat y_i| - yref_i|^2
// factored through Xhat^{-1}, which makes the error E = Xhat X^{-1} evolve
// autonomously: dE/dt = -Delta(E, Yref) E.

#include <string>

#include "seobs/liealg.hpp"
#include "seobs/projective.hpp"

namespace seobs {

struct ObserverState {
  Pose estimate;
};

/// Correction term; angular part Omega_Delta, linear part V_Delta.
using Innovation = Twist;

double cost(const Pose& xhat, const MeasurementSet& m);

/// Unprojected gradient matrix sum_i k_i (I - e_i e_i^T) yref_i e_i^T.
Matrix4 innovation_sum(const Pose& xhat, const MeasurementSet& m);

/// Delta = -P(innovation_sum(xhat, m)).
Innovation innovation(const Pose& xhat, const MeasurementSet& m);

/// Block evaluation of Delta:
///   Omega_Delta = -1/2 sum k_i (e_i x yref_i)   (underlined parts)
///   V_Delta     =  sum k_i e_i4 ((e_i . yref_i) e_i - yref_i)
Innovation innovation_matrix_form(const Pose& xhat, const MeasurementSet& m);

/// Xhat hat(A) - hat(Delta) Xhat, the tangent vector at Xhat.
Matrix4 observer_derivative(const ObserverState& s, const Twist& a, const MeasurementSet& m);

/// Xhat+ = exp(-dt Delta) Xhat exp(dt A) with a caller-supplied Delta.
ObserverState step_with_innovation(const ObserverState& s, const Twist& a, const Innovation& delta,
                                   double dt);

/// One explicit splitting step; Delta is evaluated at the step start.
/// Throws std::invalid_argument for dt <= 0.
ObserverState step(const ObserverState& s, const Twist& a, const MeasurementSet& m, double dt);

/// E = Xhat X^{-1}.
Pose group_error(const Pose& xhat, const Pose& x);

/// Cost expressed on the group error: sum_i k_i/2 |E yref_i/|E yref_i| - yref_i|^2.
double error_cost(const Pose& e, const ReferenceSet& refs);

enum class ObservabilityCase { Case1, Case2, Case3, NotSatisfied };

std::string to_string(ObservabilityCase c);

struct ObservabilityReport {
  ObservabilityCase kind = ObservabilityCase::NotSatisfied;
  /// Relevant cross-product norm of the best witnessing subset (0 if none).
  double margin = 0.0;
  /// Set when the witnessing margin is below kNearDegenerateMargin.
  bool near_degenerate = false;
};

inline constexpr double kCollinearityTolerance = 1e-9;
inline constexpr double kNearDegenerateMargin = 1e-4;

/// Classifies a reference set against the three observability cases, checked
/// in order 1, 2, 3. Throws std::invalid_argument on an empty list.
ObservabilityReport check_observability_a1(const std::vector<ProjectivePoint>& refs);

}  // namespace seobs
