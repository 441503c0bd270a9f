#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "seobs/bias_observer.hpp"
#include "seobs/liealg.hpp"
#include "seobs/observer.hpp"
#include "seobs/projective.hpp"

namespace seobs {

struct ReferenceSpec {
  enum class Kind { Point, Vector };
  Kind kind = Kind::Point;
  Vector3 coords = Vector3::Zero();

  ProjectivePoint embed() const;
};

/// a sin(omega t + phase)
struct Sinusoid {
  double amplitude = 0.0;
  double frequency = 0.0;  // rad/s
  double phase = 0.0;      // rad

  double at(double t) const;
};

struct TwistProfile {
  std::array<Sinusoid, 3> angular{};
  std::array<Sinusoid, 3> linear{};

  /// Default excitation: mixed-frequency sinusoids on all six axes.
  static TwistProfile Default();
};

struct NoiseStd {
  double angular = 0.0;  // rad/s
  double linear = 0.0;   // m/s
};

struct Scenario {
  std::string name = "custom";
  std::vector<ReferenceSpec> geometry;
  std::vector<double> gains;
  BiasState true_bias;
  AntiWindupConfig antiwindup;
  BiasLaw bias_law = BiasLaw::AntiWindup;
  TwistProfile trajectory = TwistProfile::Default();
  Pose initial_true_pose;
  Pose initial_estimate;
  BiasState initial_bias_estimate;
  double dt = 1e-3;
  double duration = 60.0;
  std::optional<NoiseStd> noise;
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument on structural problems (no geometry,
  /// gain count mismatch, non-positive gains, dt <= 0, duration <= dt).
  void validate() const;
  ReferenceSet references() const;
  std::vector<ProjectivePoint> reference_points() const;
  /// floor(duration / dt) + 1.
  std::size_t row_count() const;
};

struct LogRow {
  double t = 0.0;
  Pose true_pose;
  Pose estimate;
  BiasState bias_estimate;
  double rot_err = 0.0;        // rad, angle of Rhat R^T
  double pos_err = 0.0;        // m, |phat - p|
  double group_pos_err = 0.0;  // m, |phat - Rhat R^T p|
  double bias_angular_err = 0.0;
  double bias_linear_err = 0.0;
  double cost = 0.0;
  double lyapunov = 0.0;
  double innov_norm = 0.0;
};

struct TrajectoryLog {
  std::string scenario;
  std::vector<LogRow> rows;
  ObservabilityReport observability;
  std::vector<std::string> warnings;
};

class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double t);
  double time() const { return time_; }

 private:
  double time_;
};

inline const BiasState kPaperBias{Vector3(-0.02, 0.02, 0.01), Vector3(0.2, -0.1, 0.1)};

Twist twist_profile(const TwistProfile& params, double t);

/// X+ = X exp(dt A), re-orthonormalized on drift.
Pose integrate_true_state(const Pose& x, const Twist& a, double dt);

struct SensorSample {
  Twist measured_velocity;
  MeasurementSet measurements;
};

/// A_y = A + b_A (+ Gaussian noise when configured); y_i = h(X, yref_i).
SensorSample sensor_sample(const Pose& x, const Twist& a, const Scenario& s, std::mt19937_64& rng);

/// Closed-loop run; deterministic given the scenario (including rng_seed).
/// Throws NumericalFailure with the offending timestamp on non-finite state.
TrajectoryLog run_scenario(const Scenario& s);

double rotation_angle_error(const Matrix3& r_tilde);
double position_error(const Vector3& p_hat, const Vector3& p);
/// (|b_Omega - bhat_Omega|, |b_V - bhat_V|)
std::pair<double, double> bias_error_norms(const BiasState& truth, const BiasState& estimate);

/// The three reference geometries with the default gains, biases and trajectory.
std::vector<Scenario> builtin_scenarios();
/// "case1" | "case2" | "case3"
std::optional<Scenario> builtin_scenario(const std::string& name);

/// Default true initial pose: 30 deg about z, p = [1, -1, 0.5] m.
Pose default_initial_true_pose();

}  // namespace seobs
