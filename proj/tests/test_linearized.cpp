#include <doctest.h>

#include <cmath>
#include <random>

#include "opo/error.hpp"
#include "opo/linearized.hpp"
#include "opo/wigner.hpp"
#include "oracles.hpp"

using namespace opo;

TEST_CASE("EPR transform") {
  const EprPoint e = epr_transform({1, 0, 1, 0});
  CHECK(e.x_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(e.x_minus == 0.0);
  CHECK(e.y_plus == 0.0);
  CHECK(e.y_minus == 0.0);
  const EprPoint z = epr_transform({});
  CHECK(z.x_plus == 0.0);
  CHECK(z.y_minus == 0.0);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    const PhasePoint p{n(rng), n(rng), n(rng), n(rng)};
    const EprPoint q = epr_transform(p);
    const double norm_p = p.vec().squaredNorm();
    const double norm_q = q.x_plus * q.x_plus + q.y_plus * q.y_plus + q.x_minus * q.x_minus + q.y_minus * q.y_minus;
    CHECK(norm_q == doctest::Approx(norm_p).epsilon(1e-14));
    const PhasePoint back = epr_inverse(q);
    CHECK((back.vec() - p.vec()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("linearized variances") {
  const EprVariances below = linearized_variances(0.5, 0.01);
  CHECK(*below.v_x_plus == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(*below.v_x_minus == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(*below.v_y_plus == *below.v_x_minus);
  CHECK(*below.v_y_minus == *below.v_x_plus);
  CHECK(below.source == VarianceSource::Linearized);

  const EprVariances above = linearized_variances(1.5, 0.01);
  CHECK(*above.v_x_plus == doctest::Approx(52.0).epsilon(1e-14));
  CHECK(*above.v_x_minus == 0.5);

  const EprVariances vac = linearized_variances(0.0, 0.01);
  CHECK(*vac.v_x_plus == 1.0);
  CHECK(*vac.v_x_minus == 1.0);

  const EprVariances at = linearized_variances(1.0, 0.01);
  CHECK_FALSE(at.v_x_plus.has_value());
  CHECK_FALSE(at.v_y_minus.has_value());

  CHECK_THROWS_AS(linearized_variances(-0.1, 0.01), ParameterError);
  CHECK_THROWS_AS(linearized_variances(1.5, 0.0), ParameterError);
}

TEST_CASE("linearized product law and monotone squeezing") {
  double prev = 2.0;
  for (int i = 0; i < 100; ++i) {
    const double mu = 0.0099 * i;
    const EprVariances v = linearized_variances(mu, 0.01);
    CHECK(*v.v_x_minus * *v.v_x_plus == doctest::Approx(1.0 / (1.0 - mu * mu)).epsilon(1e-13));
    if (mu > 0) {
      CHECK(*v.v_x_minus < 1.0);
      CHECK(*v.v_x_plus > 1.0);
    }
    CHECK(*v.v_x_minus < prev);
    CHECK(*v.v_x_minus > 0.5);
    prev = *v.v_x_minus;
  }
}

TEST_CASE("linearized density") {
  const PhasePoint p{0.3, -1.2, 0.8, 0.4};
  CHECK(w_linear(p, 0.0) == doctest::Approx(std::exp(log_w_unnorm(p, make_params(0.0, 0.0)))).epsilon(1e-14));
  CHECK_THROWS_AS(w_linear(p, 1.0), ParameterError);
  CHECK_THROWS_AS(w_linear(p, 1.3), ParameterError);
  CHECK(w_linear(p, 0.6) == doctest::Approx(std::exp(log_w_unnorm(p, make_params(0.6, 0.0)))).epsilon(1e-14));
}

TEST_CASE("Gaussian moments of the linearized density reproduce the variances") {
  for (double mu : {0.2, 0.5, 0.8}) {
    const auto c = oracle::linear_gaussian_covariance(mu);
    auto cov = [&](int i, int j) { return c[static_cast<std::size_t>(i * 4 + j)]; };
    const double vxp = 0.5 * (cov(0, 0) + cov(2, 2)) + cov(0, 2);
    const double vxm = 0.5 * (cov(0, 0) + cov(2, 2)) - cov(0, 2);
    const double vyp = 0.5 * (cov(1, 1) + cov(3, 3)) + cov(1, 3);
    const double vym = 0.5 * (cov(1, 1) + cov(3, 3)) - cov(1, 3);
    const EprVariances v = linearized_variances(mu, 0.01);
    CHECK(vxp == doctest::Approx(*v.v_x_plus).epsilon(1e-12));
    CHECK(vxm == doctest::Approx(*v.v_x_minus).epsilon(1e-12));
    CHECK(vyp == doctest::Approx(*v.v_y_plus).epsilon(1e-12));
    CHECK(vym == doctest::Approx(*v.v_y_minus).epsilon(1e-12));
  }
}

TEST_CASE("Duan-Simon check") {
  EprVariances vac;
  vac.v_x_minus = 1.0;
  vac.v_y_plus = 1.0;
  const DuanSimonResult r0 = duan_simon_check(vac);
  CHECK(r0.sum == 2.0);
  CHECK_FALSE(r0.entangled);

  const DuanSimonResult r1 = duan_simon_check(linearized_variances(0.5, 0.01));
  CHECK(r1.sum == doctest::Approx(4.0 / 3.0));
  CHECK(r1.entangled);

  const DuanSimonResult r2 = duan_simon_check(linearized_variances(1.5, 0.01));
  CHECK(r2.sum == doctest::Approx(1.0));
  CHECK(r2.entangled);

  for (int k = 1; k <= 20; ++k) {
    if (k == 10) continue;
    CHECK(duan_simon_check(linearized_variances(0.1 * k, 0.01)).entangled);
  }
  CHECK_THROWS_AS(duan_simon_check(EprVariances{}), ParameterError);
}
