#include <cmath>

#include "doctest.h"
#include "robsvm/losses.hpp"
#include "robsvm/rng.hpp"
#include "support/oracles.hpp"

using namespace robsvm;

TEST_CASE("loss catalog formulas") {
  CHECK(loss_eval(LossSpec::hinge(), -1.0) == 0.0);
  CHECK(loss_eval(LossSpec::hinge(), 2.0) == 2.0);

  CHECK(loss_eval(LossSpec::truncated_hinge(1.0), 3.0) == 1.0);
  CHECK(loss_eval(LossSpec::truncated_hinge(1.0), -2.0) == 0.0);

  CHECK(loss_eval(LossSpec::pinball(-0.5), -2.0) == 1.0);
  CHECK(loss_eval(LossSpec::pinball(-0.5), 2.0) == 2.0);

  CHECK(loss_eval(LossSpec::pinball_eps_zone(0.5, -0.5, -0.25), 0.2) == 0.0);
  CHECK(loss_eval(LossSpec::pinball_eps_zone(0.5, -0.5, -0.25), 2.0) == 1.5);

  CHECK(loss_eval(LossSpec::truncated_pinball(-0.5, 1.0), -4.0) == 1.0);
  CHECK(loss_eval(LossSpec::truncated_pinball(-0.5, 1.0), 3.0) == 3.0);

  CHECK(loss_eval(LossSpec::least_square(), -3.0) == 9.0);

  CHECK_THROWS_AS(loss_eval(LossSpec::truncated_hinge(0.5), 0.0), Error);
  CHECK_THROWS_AS(loss_eval(LossSpec::pinball(0.5), 0.0), Error);

  // the catalog never goes negative
  SplitMix64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const double u = 20.0 * rng.next_double() - 10.0;
    CHECK(loss_eval(LossSpec::hinge(), u) >= 0.0);
    CHECK(loss_eval(LossSpec::truncated_pinball(-0.7, 2.0), u) >= 0.0);
    CHECK(loss_eval(LossSpec::pinball_eps_zone(0.1, -0.3, -0.2), u) >= 0.0);
  }
}

TEST_CASE("eel equals top-r order-statistic means") {
  Eigen::VectorXd v(3);
  v << 3, 1, 2;
  CHECK(eel(v, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eel(v, 1.0 - 1.0 / 3.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(eel(v, 1.0 - 2.0 / 3.0) == doctest::Approx(2.5).epsilon(1e-12));

  CHECK_THROWS_AS(eel(Eigen::VectorXd(0), 0.1), Error);
  CHECK_THROWS_AS(eel(v, 1.0), Error);
}

TEST_CASE("eel matches the scalar-minimization oracle") {
  SplitMix64 rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next_below(30));
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = 5.0 * rng.next_double();
    const double alpha = 0.99 * rng.next_double();
    CHECK(eel(v, alpha) ==
          doctest::Approx(oracles::eel_minimize_oracle(v, alpha)).epsilon(1e-8));
  }
}

TEST_CASE("eel properties: monotone in alpha, homogeneous, mean at zero") {
  SplitMix64 rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd v(12);
    for (Eigen::Index i = 0; i < 12; ++i) v[i] = 3.0 * rng.next_double();

    CHECK(std::fabs(eel(v, 0.0) - v.mean()) < 1e-12);

    double prev = -1.0;
    for (double alpha = 0.0; alpha < 0.999; alpha += 0.05) {
      const double e = eel(v, alpha);
      CHECK(e >= prev - 1e-12);
      prev = e;
    }

    const double s = 0.1 + 4.0 * rng.next_double();
    CHECK(std::fabs(eel(s * v, 0.35) - s * eel(v, 0.35)) <
          1e-10 * std::max(1.0, s * eel(v, 0.35)));
  }
}

TEST_CASE("fisher_argmin recovers the Bayes response for margin-linear losses") {
  CHECK(fisher_argmin(LossSpec::hinge(), 0.7, 0.3) == doctest::Approx(1.0));
  CHECK(fisher_argmin(LossSpec::hinge(), 0.3, 0.7) == doctest::Approx(-1.0));
  CHECK(fisher_argmin(LossSpec::pinball(-0.5), 0.8, 0.2) ==
        doctest::Approx(1.0));

  // least squares is convex but not margin-linear: argmin is p - q, off +-1
  const double z = fisher_argmin(LossSpec::least_square(), 0.7, 0.3);
  CHECK(z == doctest::Approx(0.4).epsilon(1e-9));

  CHECK_THROWS_AS(fisher_argmin(LossSpec::hinge(), 0.7, 0.31), Error);
  CHECK_THROWS_AS(fisher_argmin(LossSpec::hinge(), 0.5, 0.5), Error);
}

TEST_CASE("fisher grid property across the catalog") {
  for (double p = 0.55; p < 0.96; p += 0.05) {
    const double q = 1.0 - p;
    for (const LossSpec& spec :
         {LossSpec::hinge(), LossSpec::pinball(-0.1), LossSpec::pinball(-1.0)}) {
      CHECK(std::fabs(fisher_argmin(spec, p, q) - 1.0) < 2e-3);
      CHECK(std::fabs(fisher_argmin(spec, q, p) + 1.0) < 2e-3);
    }
  }
}
