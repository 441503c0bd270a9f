#include "seobs/simulator.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

namespace seobs {

ProjectivePoint ReferenceSpec::embed() const {
  return kind == Kind::Point ? embed_point(coords) : embed_vector(coords);
}

double Sinusoid::at(double t) const { return amplitude * std::sin(frequency * t + phase); }

TwistProfile TwistProfile::Default() {
  constexpr double pi = std::numbers::pi;
  TwistProfile p;
  p.angular = {Sinusoid{0.3, 0.7, 0.0}, Sinusoid{0.2, 0.5, pi / 3}, Sinusoid{0.25, 0.9, pi / 6}};
  p.linear = {Sinusoid{0.5, 0.4, 0.0}, Sinusoid{0.4, 0.6, pi / 4}, Sinusoid{0.3, 0.8, pi / 2}};
  return p;
}

void Scenario::validate() const {
  if (geometry.empty()) {
    throw std::invalid_argument("scenario '" + name + "': empty geometry");
  }
  if (gains.size() != geometry.size()) {
    throw std::invalid_argument("scenario '" + name + "': " + std::to_string(gains.size()) +
                                " gains for " + std::to_string(geometry.size()) + " references");
  }
  for (double k : gains) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument("scenario '" + name + "': gains must be positive");
    }
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("scenario '" + name + "': dt must be positive");
  }
  if (!(duration > dt) || !std::isfinite(duration)) {
    throw std::invalid_argument("scenario '" + name + "': duration must exceed dt");
  }
  if (!initial_true_pose.isValid() || !initial_estimate.isValid()) {
    throw std::invalid_argument("scenario '" + name + "': initial poses must lie on SE(3)");
  }
  if (noise && (noise->angular < 0.0 || noise->linear < 0.0)) {
    throw std::invalid_argument("scenario '" + name + "': noise std must be non-negative");
  }
  antiwindup.validate();
  for (const auto& g : geometry) {
    (void)g.embed();  // rejects zero direction vectors
  }
}

ReferenceSet Scenario::references() const {
  ReferenceSet refs;
  for (std::size_t i = 0; i < geometry.size(); ++i) {
    refs.push_back({geometry[i].embed(), gains.at(i)});
  }
  return refs;
}

std::vector<ProjectivePoint> Scenario::reference_points() const {
  std::vector<ProjectivePoint> pts;
  for (const auto& g : geometry) {
    pts.push_back(g.embed());
  }
  return pts;
}

std::size_t Scenario::row_count() const {
  // The small offset absorbs representation error in duration/dt (60 / 1e-3).
  return static_cast<std::size_t>(std::floor(duration / dt + 1e-9)) + 1;
}

NumericalFailure::NumericalFailure(const std::string& what, double t)
    : std::runtime_error(what + " at t=" + std::to_string(t) + " s"), time_(t) {}

Twist twist_profile(const TwistProfile& params, double t) {
  Twist out;
  for (int k = 0; k < 3; ++k) {
    out.angular(k) = params.angular[k].at(t);
    out.linear(k) = params.linear[k].at(t);
  }
  return out;
}

Pose integrate_true_state(const Pose& x, const Twist& a, double dt) {
  return (x * exp_se3(dt * a)).normalized();
}

SensorSample sensor_sample(const Pose& x, const Twist& a, const Scenario& s, std::mt19937_64& rng) {
  Twist measured = a + s.true_bias.asTwist();
  if (s.noise) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < 3; ++k) {
      measured.angular(k) += s.noise->angular * gauss(rng);
    }
    for (int k = 0; k < 3; ++k) {
      measured.linear(k) += s.noise->linear * gauss(rng);
    }
  }
  return {measured, measure(x, s.references())};
}

double rotation_angle_error(const Matrix3& r_tilde) { return rotation_angle(r_tilde); }

double position_error(const Vector3& p_hat, const Vector3& p) { return (p_hat - p).norm(); }

std::pair<double, double> bias_error_norms(const BiasState& truth, const BiasState& estimate) {
  const BiasState d = truth - estimate;
  return {d.angular.norm(), d.linear.norm()};
}

TrajectoryLog run_scenario(const Scenario& s) {
  s.validate();
  TrajectoryLog log;
  log.scenario = s.name;
  log.observability = check_observability_a1(s.reference_points());
  if (log.observability.kind == ObservabilityCase::NotSatisfied) {
    log.warnings.push_back("reference geometry does not satisfy any observability case");
  } else if (log.observability.near_degenerate) {
    log.warnings.push_back("reference geometry is close to degenerate");
  }

  const ReferenceSet refs = s.references();
  const std::size_t n_rows = s.row_count();
  log.rows.reserve(n_rows);

  std::mt19937_64 rng(s.rng_seed);
  Pose x = s.initial_true_pose;
  ObserverState est{s.initial_estimate};
  BiasState bhat = s.initial_bias_estimate;

  for (std::size_t k = 0; k < n_rows; ++k) {
    const double t = static_cast<double>(k) * s.dt;
    const Twist a = twist_profile(s.trajectory, t);
    const SensorSample sample = sensor_sample(x, a, s, rng);
    const Innovation delta = innovation(est.estimate, sample.measurements);

    LogRow row;
    row.t = t;
    row.true_pose = x;
    row.estimate = est.estimate;
    row.bias_estimate = bhat;
    const Pose e = group_error(est.estimate, x);
    row.rot_err = rotation_angle_error(est.estimate.rotation() * x.rotation().transpose());
    row.pos_err = position_error(est.estimate.position(), x.position());
    row.group_pos_err = e.position().norm();
    std::tie(row.bias_angular_err, row.bias_linear_err) = bias_error_norms(s.true_bias, bhat);
    row.cost = cost(est.estimate, sample.measurements);
    row.lyapunov = lyapunov_value(e, s.true_bias - bhat, refs, s.antiwindup.k_b);
    row.innov_norm = twist_norm(delta);
    if (!std::isfinite(row.cost) || !std::isfinite(row.lyapunov) || !delta.allFinite() ||
        !bhat.allFinite() || !est.estimate.isValid(1e-6)) {
      throw NumericalFailure("non-finite or invalid observer state", t);
    }
    log.rows.push_back(row);
    if (k + 1 == n_rows) {
      break;
    }

    const BiasState db = bias_derivative(s.bias_law, est.estimate, sample.measurements, bhat,
                                         s.antiwindup);
    est = step_with_innovation(est, sample.measured_velocity - bhat.asTwist(), delta, s.dt);
    bhat = bhat + db * s.dt;
    x = integrate_true_state(x, a, s.dt);
  }
  return log;
}

Pose default_initial_true_pose() {
  return {exp_so3(Vector3(0.0, 0.0, std::numbers::pi / 6)), Vector3(1.0, -1.0, 0.5)};
}

namespace {

Scenario paper_defaults(std::string name, std::vector<ReferenceSpec> geometry) {
  Scenario s;
  s.name = std::move(name);
  s.geometry = std::move(geometry);
  s.gains.assign(s.geometry.size(), 2.0);
  s.true_bias = kPaperBias;
  s.antiwindup = AntiWindupConfig{1.0, 10.0, 10.0, 0.052, 0.346};
  s.bias_law = BiasLaw::AntiWindup;
  s.trajectory = TwistProfile::Default();
  s.initial_true_pose = default_initial_true_pose();
  s.initial_estimate = Pose::Identity();
  s.initial_bias_estimate = BiasState{};
  s.dt = 1e-3;
  s.duration = 60.0;
  return s;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  using K = ReferenceSpec::Kind;
  const double h = std::sqrt(3.0) / 2.0;
  const ReferenceSpec v1{K::Vector, Vector3(0, 0, 1)};
  const ReferenceSpec v2{K::Vector, Vector3(h, 0.5, 0)};
  const ReferenceSpec p1{K::Point, Vector3(1, 0, 0)};
  const ReferenceSpec p2{K::Point, Vector3(-0.5, h, 0)};
  const ReferenceSpec p3{K::Point, Vector3(-0.5, -h, 0)};
  return {paper_defaults("case1", {v1, v2, p1}), paper_defaults("case2", {v1, p1, p2}),
          paper_defaults("case3", {p1, p2, p3})};
}

std::optional<Scenario> builtin_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) {
      return s;
    }
  }
  return std::nullopt;
}

}  // namespace seobs
