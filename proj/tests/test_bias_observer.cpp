#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <stdexcept>

#include "seobs/bias_observer.hpp"
#include "seobs/sampling.hpp"
#include "seobs/simulator.hpp"

using namespace seobs;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double twist_max_abs(const Twist& t) {
  return std::max(t.angular.cwiseAbs().maxCoeff(), t.linear.cwiseAbs().maxCoeff());
}

double bias_max_abs(const BiasState& b) { return twist_max_abs(b.asTwist()); }

double symmetric_condition(const Matrix3& m) {
  const Vector3 ev = Eigen::SelfAdjointEigenSolver<Matrix3>(m).eigenvalues().cwiseAbs();
  return ev.maxCoeff() / ev.minCoeff();
}

}  // namespace

TEST_CASE("sat") {
  CHECK(sat(Vector3(3, 0, 0), 1.0) == Vector3(1, 0, 0));
  CHECK(sat(Vector3(0.1, 0, 0), 1.0) == Vector3(0.1, 0, 0));
  CHECK(sat(Vector3::Zero(), 1.0) == Vector3::Zero());
  CHECK_THROWS_AS(sat(Vector3(1, 0, 0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sat(Vector3(1, 0, 0), -2.0), std::invalid_argument);

  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> delta(0.01, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Vector3 x = random_vector(rng, 2.0);
    const double d = delta(rng);
    const Vector3 s = sat(x, d);
    CHECK(s.norm() <= std::min(x.norm(), d) * (1 + 1e-15));
    CHECK(s.cross(x).norm() <= 1e-14 * x.squaredNorm());
    CHECK(s.dot(x) >= 0.0);
    if (x.norm() <= d) {
      CHECK(s == x);
    }
  }
}

TEST_CASE("bias derivative forms") {
  std::mt19937_64 rng(52);
  const ReferenceSet refs = random_reference_set(rng, 3);
  const Pose x = random_pose(rng);
  const MeasurementSet perfect = measure(x, refs);
  CHECK(twist_max_abs(bias_derivative_projection(x, perfect, 1.0)) <= 1e-15);
  CHECK(bias_max_abs(bias_derivative_decomposed(x, perfect, 1.0)) <= 1e-15);

  for (int i = 0; i < 1000; ++i) {
    const MeasurementSet m = random_measurements(rng, 1 + i % 5);
    const Pose xhat = random_pose(rng, 2.0);
    const double k_b = 0.5 + (i % 7);
    const Twist proj = bias_derivative_projection(xhat, m, k_b);
    const BiasState dec = bias_derivative_decomposed(xhat, m, k_b);
    CHECK(twist_max_abs(proj - dec.asTwist()) <= 1e-10);

    const Twist doubled = bias_derivative_projection(xhat, m, 2.0 * k_b);
    CHECK(doubled.angular == 2.0 * proj.angular);
    CHECK(doubled.linear == 2.0 * proj.linear);
  }

  const MeasurementSet m = random_measurements(rng, 3);
  const Innovation d = innovation_matrix_form(Pose::Identity(), m);
  const BiasState at_id = bias_derivative_decomposed(Pose::Identity(), m, 1.5);
  CHECK(max_abs(at_id.angular - 1.5 * d.angular) <= 1e-15);
  CHECK(max_abs(at_id.linear - 1.5 * d.linear) <= 1e-15);
}

TEST_CASE("anti-windup bias derivative") {
  std::mt19937_64 rng(53);
  const AntiWindupConfig cfg;
  const MeasurementSet m = random_measurements(rng, 3);
  const Pose xhat = random_pose(rng);

  const BiasState inside{Vector3(0.01, -0.02, 0.03), Vector3(0.1, 0.2, -0.1)};
  const BiasState a = bias_derivative_antiwindup(xhat, m, inside, cfg);
  const BiasState b = bias_derivative_decomposed(xhat, m, cfg.k_b);
  CHECK(a.angular == b.angular);
  CHECK(a.linear == b.linear);

  const Pose x = random_pose(rng);
  const MeasurementSet perfect = measure(x, random_reference_set(rng, 3));
  const BiasState outside{2.0 * cfg.delta_angular * Vector3::UnitX(),
                          3.0 * cfg.delta_linear * Vector3::UnitY()};
  const BiasState leak = bias_derivative_antiwindup(x, perfect, outside, cfg);
  CHECK(max_abs(leak.angular - (-cfg.kappa_angular * cfg.delta_angular) * Vector3::UnitX()) <=
        1e-15);
  CHECK(max_abs(leak.linear - (-2.0 * cfg.kappa_linear * cfg.delta_linear) * Vector3::UnitY()) <=
        1e-14);

  CHECK(bias_max_abs(bias_derivative(BiasLaw::None, xhat, m, outside, cfg)) == 0.0);
  CHECK(bias_derivative(BiasLaw::Proposition1, xhat, m, outside, cfg)
            .asTwist()
            .isApprox(bias_derivative_projection(xhat, m, cfg.k_b), 0.0));
}

TEST_CASE("AntiWindupConfig validation and bias-law names") {
  AntiWindupConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.kappa_linear = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AntiWindupConfig{};
  cfg.delta_angular = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  for (BiasLaw law :
       {BiasLaw::None, BiasLaw::Proposition1, BiasLaw::Decomposed, BiasLaw::AntiWindup}) {
    CHECK(parse_bias_law(to_string(law)) == law);
  }
  CHECK_FALSE(parse_bias_law("sometimes").has_value());
}

TEST_CASE("step_biased") {
  std::mt19937_64 rng(54);
  const AntiWindupConfig cfg;
  const Pose x = random_pose(rng);
  const MeasurementSet perfect = measure(x, random_reference_set(rng, 3));
  const BiasState b{Vector3(0.01, 0.02, -0.01), Vector3(0.1, 0, 0.05)};

  const auto [s1, b1] = step_biased({x}, b, b.asTwist(), perfect, cfg, 1e-3);
  CHECK(s1.estimate.isApprox(x, 1e-15));
  CHECK(bias_max_abs(b1 - b) <= 1e-15);

  const auto [s0, b0] = step_biased({x}, BiasState{}, Twist{}, perfect, cfg, 1e-3);
  CHECK(s0.estimate.isApprox(x, 1e-15));
  CHECK(bias_max_abs(b0) <= 1e-15);

  CHECK_THROWS_AS(step_biased({x}, b, Twist{}, perfect, cfg, 0.0), std::invalid_argument);
}

TEST_CASE("closed-loop equilibrium") {
  std::mt19937_64 rng(55);
  const Scenario sc = *builtin_scenario("case1");
  const ReferenceSet refs = sc.references();
  Pose x = random_pose(rng);
  Pose xhat = x;
  BiasState bhat = kPaperBias;
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const Twist a = twist_profile(sc.trajectory, k * sc.dt);
    const MeasurementSet m = measure(x, refs);
    const Twist ay = a + kPaperBias.asTwist();
    const Matrix4 e_before = group_error(xhat, x).matrix();
    const auto [next, next_bias] = step_biased({xhat}, bhat, ay, m, sc.antiwindup, sc.dt);
    xhat = next.estimate;
    bhat = next_bias;
    x = integrate_true_state(x, a, sc.dt);
    worst = std::max(worst, max_abs(group_error(xhat, x).matrix() - e_before));
    worst = std::max(worst, bias_max_abs(bhat - kPaperBias));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("lyapunov_value") {
  std::mt19937_64 rng(56);
  const ReferenceSet refs = random_reference_set(rng, 3);
  CHECK(lyapunov_value(Pose::Identity(), BiasState{}, refs, 1.0) == 0.0);
  CHECK(lyapunov_value(Pose::Identity(), BiasState{Vector3::Zero(), Vector3::UnitX()}, refs, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lyapunov_value(Pose::Identity(), BiasState{Vector3::UnitZ(), Vector3::Zero()}, refs, 2.0) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(lyapunov_value(Pose::Identity(), BiasState{}, refs, 0.0), std::invalid_argument);

  for (int i = 0; i < 200; ++i) {
    const Pose e = random_pose(rng);
    const BiasState bt{random_vector(rng), random_vector(rng)};
    CHECK(lyapunov_value(e, bt, refs, 1.3) > 0.0);
  }
}

TEST_CASE("Assumption 2 matrices for the three-point geometry") {
  const ReferenceSet refs = builtin_scenario("case3")->references();
  REQUIRE(refs.size() == 3);

  // Direct evaluation of both sums.
  Matrix3 g = Matrix3::Zero();
  Matrix3 l = Matrix3::Zero();
  Matrix3 s = Matrix3::Zero();
  for (const auto& r : refs) {
    const Vector3 u = r.point.underline();
    const double w = r.point.w();
    Matrix3 ux;
    ux.col(0) = u.cross(Vector3::UnitX());
    ux.col(1) = u.cross(Vector3::UnitY());
    ux.col(2) = u.cross(Vector3::UnitZ());
    g += r.gain * ux * ux;
    l += r.gain * w * ux;
    s += r.gain * w * w * (Matrix3::Identity() - u * u.transpose());
  }
  const Matrix3 h = l * g.inverse() * l - s;

  const Matrix3 g_expected = Vector3(-1.5, -1.5, -3.0).asDiagonal();
  const Matrix3 h_expected = Vector3(-2.25, -2.25, -3.0).asDiagonal();
  CHECK(max_abs(g - g_expected) <= 1e-14);
  CHECK(max_abs(h - h_expected) <= 1e-14);

  const ObservabilityMatrices om = observability_matrices_a2(refs);
  REQUIRE(om.h.has_value());
  CHECK(max_abs(om.g - g_expected) <= 1e-14);
  CHECK(max_abs(*om.h - h_expected) <= 1e-14);
  CHECK(om.cond_g == doctest::Approx(symmetric_condition(g_expected)).epsilon(1e-12));
  CHECK(om.cond_h == doctest::Approx(symmetric_condition(h_expected)).epsilon(1e-12));
  CHECK(om.cond_g == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(om.cond_h == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(om.full_rank);
}

TEST_CASE("Assumption 2 rejections") {
  for (const char* name : {"case1", "case2"}) {
    CHECK(observability_matrices_a2(builtin_scenario(name)->references()).full_rank);
  }

  const ReferenceSet dirs{{embed_vector(Vector3(0, 0, 1)), 2.0},
                          {embed_vector(Vector3(1, 0, 0)), 2.0},
                          {embed_vector(Vector3(0, 1, 1)), 2.0}};
  const ObservabilityMatrices all_dirs = observability_matrices_a2(dirs);
  REQUIRE(all_dirs.h.has_value());
  CHECK(all_dirs.h->isZero());
  CHECK_FALSE(all_dirs.full_rank);

  const ObservabilityMatrices single =
      observability_matrices_a2({{embed_vector(Vector3(0, 0, 1)), 2.0}});
  CHECK_FALSE(single.full_rank);
  CHECK_FALSE(single.h.has_value());
  CHECK_FALSE(single.diagnostic.empty());
  Eigen::FullPivLU<Matrix3> lu(single.g);
  lu.setThreshold(1e-12);
  CHECK(lu.rank() == 2);

  CHECK_THROWS_AS(observability_matrices_a2({}), std::invalid_argument);

  std::mt19937_64 rng(57);
  for (int i = 0; i < 100; ++i) {
    const ObservabilityMatrices om = observability_matrices_a2(random_reference_set(rng, 4));
    CHECK(max_abs(om.g - om.g.transpose()) <= 1e-15);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix3>(om.g).eigenvalues().maxCoeff() <= 1e-12);
  }
}
