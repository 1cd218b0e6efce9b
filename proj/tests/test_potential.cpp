#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "opo/error.hpp"
#include "opo/potential.hpp"
#include "opo/sde.hpp"
#include "opo/wigner.hpp"
#include "oracles.hpp"

using namespace opo;

namespace {

PhasePoint random_point(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng), u(rng)};
}

double rel_max_diff(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("diffusion scalars") {
  const OpoParams p = make_params(0.5, 0.01);
  const DiffusionScalars o = abcd({}, p);
  CHECK(o.a == 1.0);
  CHECK(o.b == 1.0);
  CHECK(o.c == 0.0);
  CHECK(o.d == 0.0);
  const DiffusionScalars s = abcd({1, 0, 0, 1}, p);
  CHECK(s.a == doctest::Approx(1.005).epsilon(1e-15));
  CHECK(s.b == doctest::Approx(1.005).epsilon(1e-15));
  CHECK(s.c == 0.0);
  CHECK(s.d == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(s.det_factor() == doctest::Approx(1.01).epsilon(1e-15));
}

TEST_CASE("determinant identity at random points") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const PhasePoint x = random_point(rng, 15.0);
    for (double g2 : {0.0, 0.01, 0.3}) {
      const DiffusionScalars s = abcd(x, make_params(1.2, g2));
      const double rhs = 1.0 + 0.5 * g2 * (x.r1_sq() + x.r2_sq());
      CHECK(std::abs(s.det_factor() - rhs) <= 1e-12 * rhs);
    }
  }
}

TEST_CASE("diffusion matrix, its inverse and the noise matrix") {
  const OpoParams p = make_params(0.7, 0.01, 1.3, 13.0);
  CHECK(rel_max_diff(diffusion({}, p), 2.0 * p.gamma * Eigen::Matrix4d::Identity()) == 0.0);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const PhasePoint x = random_point(rng, 15.0);
    const Eigen::Matrix4d d = diffusion(x, p);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(rel_max_diff(d * diffusion_inverse(x, p), Eigen::Matrix4d::Identity()) < 1e-12);
    const NoiseMatrix b = noise_matrix(x, p);
    CHECK(rel_max_diff(b * b.transpose(), d) < 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(d).eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("exact field values") {
  const OpoParams p = make_params(0.5, 0.01);
  CHECK(z_exact({}, p).norm() == 0.0);
  const OpoParams lin = make_params(0.5, 0.0);
  const PhasePoint x{0.4, -0.3, 1.1, 0.2};
  const Eigen::Vector4d z = z_exact(x, lin);
  CHECK(z[0] == doctest::Approx(-x.x1 + 0.5 * x.x2).epsilon(1e-15));
  CHECK(z[2] == doctest::Approx(-x.x2 + 0.5 * x.x1).epsilon(1e-15));
  CHECK(z_exact(x, lin, ExactZVariant::CrossMode) == z);
}

TEST_CASE("curl of the potential fields") {
  const OpoParams p = make_params(0.5, 0.01);
  const PhasePoint documented{1, 1, 2, 0};
  CHECK(max_curl(exact_field(p), documented) > 1e-6);
  CHECK(max_curl(exact_field(p, ExactZVariant::CrossMode), documented) > 1e-6);
  CHECK(max_curl(approx_field(p), documented) < 1e-8);

  const Eigen::Matrix4d c = curl_matrix(exact_field(p), documented);
  CHECK((c + c.transpose()).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(4);
  for (double mu : {0.5, 1.5}) {
    const OpoParams q = make_params(mu, 0.01);
    for (int i = 0; i < 100; ++i) CHECK(max_curl(approx_field(q), random_point(rng, 5.0)) < 1e-8);
  }

  Eigen::Matrix4d m;
  m << 1, 2, 3, 4, 2, 5, 6, 7, 3, 6, 8, 9, 4, 7, 9, 10;
  const VectorField4 linear{[&](const PhasePoint& x) -> Eigen::Vector4d { return m * x.vec(); }, FieldTag::Other};
  CHECK(max_curl(linear, {0.3, 0.1, -2, 4}) < 1e-9);

  const OpoParams free = make_params(0.5, 0.0);
  CHECK(max_curl(exact_field(free), documented) < 1e-8);
}

TEST_CASE("mean-diffusion field is the gradient of the log density") {
  std::mt19937_64 rng(17);
  const OpoParams p = make_params(1.5, 0.01);
  for (int i = 0; i < 100; ++i) {
    const PhasePoint x = random_point(rng, 8.0);
    const double h = 1e-5;
    Eigen::Vector4d grad;
    for (int k = 0; k < 4; ++k) {
      Eigen::Vector4d e = Eigen::Vector4d::Zero();
      e[k] = h;
      grad[k] =
          (log_w_unnorm(PhasePoint::from(x.vec() + e), p) - log_w_unnorm(PhasePoint::from(x.vec() - e), p)) / (2 * h);
    }
    CHECK((grad - z_approx(x, p)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("line integral of the mean-diffusion field") {
  CHECK(potential_from_z(approx_field(make_params(0.5, 0.01)), {}) == 0.0);
  CHECK(potential_from_z(approx_field(make_params(0.0, 0.0)), {1, 0, 0, 0}) == doctest::Approx(0.5).epsilon(1e-14));
  const OpoParams p = make_params(1.5, 0.01);
  CHECK(potential_from_z(approx_field(p), {10, 0, 10, 0}) == doctest::Approx(-50.0 / 3.0).epsilon(1e-12));

  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const PhasePoint x = random_point(rng, 6.0);
    const double straight = potential_from_z(approx_field(p), x);
    PotentialOptions axis;
    axis.path = LinePath::AxisParallel;
    const double stepped = potential_from_z(approx_field(p), x, axis);
    CHECK(std::abs(straight - stepped) < 1e-8);
    CHECK(std::abs(straight + log_w_unnorm(x, p)) < 1e-8);
  }
}

TEST_CASE("line integral of the exact field depends on the path") {
  const OpoParams p = make_params(0.5, 0.01);
  const PhasePoint x{1, 1, 2, 0};
  CHECK_THROWS_AS(potential_from_z(exact_field(p), x), PotentialConditionError);
  PotentialOptions loose;
  loose.require_curl_free = false;
  const double straight = potential_from_z(exact_field(p), x, loose);
  loose.path = LinePath::AxisParallel;
  const double stepped = potential_from_z(exact_field(p), x, loose);
  CHECK(std::abs(straight - stepped) > 1e-6);
}

TEST_CASE("mean-diffusion reduction") {
  for (double mu : {0.3, 1.0, 1.5, 2.0}) CHECK(mean_diffusion_scale(make_params(mu, 0.01)) == doctest::Approx(s_factor(mu)).epsilon(1e-14));

  // off-diagonal diffusion entries average to zero under W
  const OpoParams p = make_params(1.5, 0.01);
  const oracle::ExactSampler sampler(p.mu, 0.5 * p.g2, s_factor(p.mu));
  const auto c = sampler.average([&](const PhasePoint& x) { return abcd(x, p).c; }, 200000, 5);
  const auto d = sampler.average([&](const PhasePoint& x) { return abcd(x, p).d; }, 200000, 6);
  CHECK(std::abs(c.mean) < 3.0 * c.se);
  CHECK(std::abs(d.mean) < 3.0 * d.se);
}
