#include "seobs/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "seobs/bias_observer.hpp"
#include "seobs/sampling.hpp"
#include "seobs/simulator.hpp"

namespace seobs {

namespace {

std::size_t random_count(std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(1, 5)(rng);
}

double twist_max_abs(const Twist& t) {
  return std::max(t.angular.cwiseAbs().maxCoeff(), t.linear.cwiseAbs().maxCoeff());
}

PropertyResult finish(std::string name, double worst, double tol) {
  return {std::move(name), worst <= tol, worst, tol};
}

}  // namespace

PropertyResult check_gradient_oracle(std::mt19937_64& rng, std::size_t samples,
                                     const InnovationFn& fn) {
  constexpr double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const MeasurementSet m = random_measurements(rng, random_count(rng));
    const Pose xhat = random_pose(rng);
    const Twist u = random_twist(rng);
    const double fd =
        (cost(exp_se3(h * u) * xhat, m) - cost(exp_se3(-h * u) * xhat, m)) / (2.0 * h);
    const Innovation delta = fn(xhat, m);
    const double analytic = twist_inner(delta, u);
    const double scale = std::max(std::abs(analytic), twist_norm(delta) * twist_norm(u));
    if (scale == 0.0) {
      continue;
    }
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  }
  return finish("gradient_oracle", worst, 1e-6);
}

PropertyResult check_innovation_forms(std::mt19937_64& rng, std::size_t samples,
                                      const InnovationFn& fn) {
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const MeasurementSet m = random_measurements(rng, random_count(rng));
    const Pose xhat = random_pose(rng);
    worst = std::max(worst, twist_max_abs(fn(xhat, m) - innovation_matrix_form(xhat, m)));
  }
  return finish("innovation_form_equality", worst, 1e-12);
}

PropertyResult check_bias_forms(std::mt19937_64& rng, std::size_t samples) {
  double worst = 0.0;
  std::uniform_real_distribution<double> kb(0.1, 5.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const MeasurementSet m = random_measurements(rng, random_count(rng));
    const Pose xhat = random_pose(rng);
    const double k_b = kb(rng);
    const Twist proj = bias_derivative_projection(xhat, m, k_b);
    const Twist comp = bias_derivative_decomposed(xhat, m, k_b).asTwist();
    worst = std::max(worst, twist_max_abs(proj - comp));
  }
  return finish("bias_form_equality", worst, 1e-10);
}

PropertyResult check_equivariance(std::mt19937_64& rng, std::size_t samples,
                                  const InnovationFn& fn) {
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const MeasurementSet m = random_measurements(rng, random_count(rng));
    const Pose xhat = random_pose(rng);
    const Pose q = random_pose(rng);
    const MeasurementSet mq = act_on_measurements(q, m);
    const Pose xq = group_action_phi(q, xhat);
    worst = std::max(worst, twist_max_abs(fn(xq, mq) - fn(xhat, m)));
    worst = std::max(worst, std::abs(cost(xq, mq) - cost(xhat, m)));
  }
  return finish("equivariance", worst, 1e-12);
}

PropertyResult check_error_autonomy(std::mt19937_64& rng) {
  Scenario base = *builtin_scenario("case1");
  base.true_bias = BiasState{};
  base.bias_law = BiasLaw::None;
  base.duration = 10.0;
  base.dt = 1e-3;

  const Pose e0 = exp_se3(Twist{Vector3(0.2, -0.3, 0.35), Vector3(0.8, -0.6, 0.4)});
  auto make_run = [&](const Pose& x0, const TwistProfile& profile) {
    Scenario s = base;
    s.initial_true_pose = x0;
    s.initial_estimate = e0 * x0;
    s.trajectory = profile;
    return run_scenario(s);
  };

  TwistProfile other;
  std::uniform_real_distribution<double> amp(-0.6, 0.6);
  std::uniform_real_distribution<double> freq(0.1, 1.5);
  std::uniform_real_distribution<double> phase(0.0, 6.28);
  for (auto* axes : {&other.angular, &other.linear}) {
    for (auto& ax : *axes) {
      ax = Sinusoid{amp(rng), freq(rng), phase(rng)};
    }
  }

  const TrajectoryLog a = make_run(random_pose(rng, 2.0), base.trajectory);
  const TrajectoryLog b = make_run(random_pose(rng, 2.0), other);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const Pose ea = group_error(a.rows[k].estimate, a.rows[k].true_pose);
    const Pose eb = group_error(b.rows[k].estimate, b.rows[k].true_pose);
    worst = std::max(worst, (ea.matrix() - eb.matrix()).norm());
  }
  return finish("error_autonomy", worst, 1e-6);
}

PropertyResult check_lyapunov_identity() {
  Scenario s = *builtin_scenario("case1");
  s.bias_law = BiasLaw::Proposition1;
  const TrajectoryLog log = run_scenario(s);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < log.rows.size(); ++k) {
    const double dv = (log.rows[k + 1].lyapunov - log.rows[k].lyapunov) / s.dt;
    sum += std::abs(dv + log.rows[k].innov_norm * log.rows[k].innov_norm);
  }
  const double mean = sum / static_cast<double>(log.rows.size() - 1);
  return finish("lyapunov_identity", mean, 1e-3);
}

std::vector<PropertyResult> run_selftest(const SelftestOptions& options) {
  const InnovationFn fn = options.innovation ? options.innovation : InnovationFn(&innovation);
  std::mt19937_64 rng(options.seed);
  std::vector<PropertyResult> out;
  out.push_back(check_gradient_oracle(rng, options.samples, fn));
  out.push_back(check_innovation_forms(rng, options.samples, fn));
  out.push_back(check_bias_forms(rng, options.samples));
  out.push_back(check_equivariance(rng, options.samples, fn));
  out.push_back(check_error_autonomy(rng));
  out.push_back(check_lyapunov_identity());
  return out;
}

}  // namespace seobs
