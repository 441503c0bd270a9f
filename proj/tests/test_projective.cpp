#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "seobs/projective.hpp"
#include "seobs/sampling.hpp"

using namespace seobs;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

ProjectivePoint random_element(std::mt19937_64& rng) {
  return random_reference_set(rng, 1).front().point;
}

}  // namespace

TEST_CASE("ProjectivePoint construction") {
  const ProjectivePoint p(Vector4(3, 0, 0, 4));
  CHECK(max_abs(p.rep() - Vector4(0.6, 0, 0, 0.8)) <= 1e-15);
  CHECK_THROWS_AS(ProjectivePoint(Vector4::Zero()), std::invalid_argument);
  CHECK(p.flipped().rep() == -p.rep());
  CHECK(ProjectivePoint(Vector4(0, 1, 0, 0)).isDirection());
  CHECK_FALSE(p.isDirection());
}

TEST_CASE("embed_point") {
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(max_abs(embed_point(Vector3(1, 0, 0)).rep() - Vector4(s, 0, 0, s)) <= 1e-15);
  CHECK(embed_point(Vector3::Zero()).rep() == Vector4(0, 0, 0, 1));

  const Vector3 far = Vector3(0.6, -0.8, 0.0) * 1e6;
  const ProjectivePoint y = embed_point(far);
  CHECK(y.w() <= 1e-6);
  CHECK(y.w() > 0.0);
  CHECK(max_abs(y.underline() - far.normalized()) <= 1e-6);
}

TEST_CASE("embed_vector") {
  CHECK(embed_vector(Vector3(0, 0, 2)).rep() == Vector4(0, 0, 1, 0));
  const Vector3 v(std::sqrt(3.0) / 2.0, 0.5, 0.0);
  CHECK(max_abs(embed_vector(v).rep() - Vector4(v.x(), v.y(), 0, 0)) <= 1e-15);
  CHECK_THROWS_AS(embed_vector(Vector3::Zero()), std::invalid_argument);
}

TEST_CASE("extractors") {
  const ProjectivePoint p(Vector4(1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)));
  CHECK(max_abs(extract_point(p) - Vector3(1, 0, 0)) <= 1e-15);
  CHECK(extract_direction(ProjectivePoint(Vector4(0, 0, 1, 0))) == Vector3(0, 0, 1));
  CHECK_THROWS_AS(extract_point(embed_vector(Vector3(0, 0, 1))), std::invalid_argument);
  CHECK_THROWS_AS(extract_direction(embed_point(Vector3(1, 2, 3))), std::invalid_argument);

  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const Vector3 q = random_vector(rng, 5.0);
    CHECK(max_abs(extract_point(embed_point(q)) - q) <= 1e-12 * std::max(1.0, q.norm()));
    CHECK(max_abs(extract_direction(embed_vector(q)) - q.normalized()) <= 1e-15);
  }
}

TEST_CASE("output_map") {
  std::mt19937_64 rng(32);
  const ProjectivePoint y = random_element(rng);
  CHECK(output_map(Pose::Identity(), y).rep() == y.rep());

  const ProjectivePoint at_origin =
      output_map(Pose::Translation(Vector3(1, 0, 0)), embed_point(Vector3(1, 0, 0)));
  CHECK(max_abs(at_origin.rep() - Vector4(0, 0, 0, 1)) <= 1e-15);

  for (int i = 0; i < 1000; ++i) {
    const Pose x1 = random_pose(rng, 2.0);
    const Pose x2 = random_pose(rng, 2.0);
    const ProjectivePoint yr = random_element(rng);
    const ProjectivePoint h = output_map(x1, yr);
    CHECK(std::abs(h.rep().norm() - 1.0) <= 1e-12);
    CHECK(max_abs(output_map(x1 * x2, yr).rep() - group_action_rho(x2, h).rep()) <= 1e-12);
    // The fourth component keeps its sign class.
    CHECK((h.w() > 0.0) == (yr.w() > 0.0));
    CHECK(h.isDirection() == yr.isDirection());
  }
}

TEST_CASE("group actions") {
  std::mt19937_64 rng(33);
  const ProjectivePoint y = random_element(rng);
  CHECK(group_action_rho(Pose::Identity(), y).rep() == y.rep());

  for (int i = 0; i < 1000; ++i) {
    const Pose q1 = random_pose(rng, 2.0);
    const Pose q2 = random_pose(rng, 2.0);
    const Pose x = random_pose(rng, 2.0);
    const ProjectivePoint yr = random_element(rng);
    const ProjectivePoint lhs = group_action_rho(q2, group_action_rho(q1, yr));
    CHECK(max_abs(lhs.rep() - group_action_rho(q1 * q2, yr).rep()) <= 1e-12);
    const ProjectivePoint compat = group_action_rho(q1, output_map(x, yr));
    CHECK(max_abs(compat.rep() - output_map(group_action_phi(q1, x), yr).rep()) <= 1e-12);
  }

  const Pose q = random_pose(rng);
  const Pose x = random_pose(rng);
  CHECK(group_action_phi(q, x).isApprox(x * q, 0.0));
  const Twist a = random_twist(rng);
  const Matrix4 expected = q.inverse().matrix() * hat_se3(a) * q.matrix();
  CHECK(max_abs(hat_se3(group_action_psi(q, a)) - expected) <= 1e-12);
}

TEST_CASE("output_error") {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 1000; ++i) {
    const Pose x = random_pose(rng, 2.0);
    const Pose xhat = random_pose(rng, 2.0);
    const ProjectivePoint yr = random_element(rng);
    const ProjectivePoint y = output_map(x, yr);
    CHECK(max_abs(output_error(x, y).rep() - yr.rep()) <= 1e-12);
    // E yref / |E yref| with E = Xhat X^{-1}.
    const Vector4 ey = (xhat.matrix() * x.inverse().matrix()) * yr.rep();
    CHECK(max_abs(output_error(xhat, y).rep() - ey.normalized()) <= 1e-12);
  }
  const ProjectivePoint y = random_element(rng);
  CHECK(max_abs(output_error(Pose::Identity(), y).rep() - y.rep()) <= 1e-15);
}

TEST_CASE("MeasurementSet validation") {
  CHECK_THROWS_AS(MeasurementSet({}), std::invalid_argument);
  const ProjectivePoint y = embed_vector(Vector3(0, 0, 1));
  CHECK_THROWS_AS(MeasurementSet({{y, y, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementSet({{y, y, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementSet({{y, y, std::nan("")}}), std::invalid_argument);
  const MeasurementSet m({{y, y, 2.0}});
  CHECK(m.size() == 1);
  CHECK(m.references().front().gain == 2.0);
}

TEST_CASE("measure and act_on_measurements") {
  std::mt19937_64 rng(35);
  const ReferenceSet refs = random_reference_set(rng, 4);
  const MeasurementSet at_identity = measure(Pose::Identity(), refs);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    CHECK(at_identity.entries()[i].measured.rep() == refs[i].point.rep());
    CHECK(at_identity.entries()[i].gain == refs[i].gain);
  }
  const Pose x = random_pose(rng);
  const Pose q = random_pose(rng);
  const MeasurementSet mq = act_on_measurements(q, measure(x, refs));
  const MeasurementSet direct = measure(x * q, refs);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    CHECK(max_abs(mq.entries()[i].measured.rep() - direct.entries()[i].measured.rep()) <= 1e-12);
    CHECK(mq.entries()[i].reference.rep() == refs[i].point.rep());
  }
}
