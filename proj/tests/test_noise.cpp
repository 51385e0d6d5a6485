#include <cmath>

#include "doctest.h"
#include "robsvm/noise.hpp"
#include "support/oracles.hpp"

using namespace robsvm;

TEST_CASE("gaussian quantile against the erf-based bisection oracle") {
  CHECK(quantile(NoiseFamily::Gaussian, 0, 0.5) == 0.0);
  CHECK(quantile(NoiseFamily::Gaussian, 0, 0.975) ==
        doctest::Approx(1.959964).epsilon(1e-6));
  for (double p : {0.001, 0.01, 0.1, 0.25, 0.6, 0.9, 0.975, 0.999, 0.9999}) {
    const double got = quantile(NoiseFamily::Gaussian, 0, p);
    const double want = oracles::gaussian_quantile_bisect(p);
    CHECK(std::fabs(got - want) < 1e-10);
  }
  CHECK_THROWS_AS(quantile(NoiseFamily::Gaussian, 0, 0.0), Error);
  CHECK_THROWS_AS(quantile(NoiseFamily::Gaussian, 0, 1.0), Error);
}

TEST_CASE("student-t quantiles") {
  // dof 1 is Cauchy: closed-form oracle tan(pi (p - 1/2))
  for (double p : {0.55, 0.75, 0.9, 0.99}) {
    CHECK(quantile(NoiseFamily::StudentT, 1.0, p) ==
          doctest::Approx(std::tan(M_PI * (p - 0.5))).epsilon(1e-10));
  }
  CHECK(quantile(NoiseFamily::StudentT, 1.0, 0.75) == doctest::Approx(1.0));

  // reference values (R qt): qt(0.975, 5) and qt(0.9, 3)
  CHECK(quantile(NoiseFamily::StudentT, 5.0, 0.975) ==
        doctest::Approx(2.5705818356363133).epsilon(1e-9));
  CHECK(quantile(NoiseFamily::StudentT, 3.0, 0.9) ==
        doctest::Approx(1.6377443536962102).epsilon(1e-9));

  // heavy tails dominate the Gaussian
  CHECK(quantile(NoiseFamily::StudentT, 2.0, 0.99) >
        quantile(NoiseFamily::Gaussian, 0, 0.99));
}

TEST_CASE("quantile is strictly increasing and antisymmetric") {
  for (NoiseFamily family : {NoiseFamily::Gaussian, NoiseFamily::StudentT}) {
    double prev = -1e300;
    for (int i = 1; i < 1000; ++i) {
      const double p = static_cast<double>(i) / 1000.0;
      const double z = quantile(family, 4.0, p);
      CHECK(z > prev);
      prev = z;
      CHECK(std::fabs(z + quantile(family, 4.0, 1.0 - p)) < 1e-9);
    }
  }
}

TEST_CASE("assumption 1 holds for the symmetric families") {
  CHECK(assumption1_check(NoiseFamily::Gaussian, 0, 0.7));
  CHECK(assumption1_check(NoiseFamily::StudentT, 5.0, 0.6));
  CHECK(assumption1_check(NoiseFamily::Gaussian, 0, 0.5));
}

TEST_CASE("compute_perturbation applies the quantile x std recipe") {
  Dataset ds;
  ds.features.resize(2, 1);
  ds.features << 0, 2;
  ds.labels.resize(2);
  ds.labels << -1, 1;

  NoiseSpec mid{NoiseFamily::Gaussian, 0, 0.5};
  CHECK(compute_perturbation(ds, 0, mid).magnitudes.isZero(0.0));

  NoiseSpec spec{NoiseFamily::Gaussian, 0, 0.975};
  const PerturbationVector pv = compute_perturbation(ds, 0, spec);
  CHECK(pv.magnitudes.size() == 2);
  // sample std of {0,2} is sqrt(2); 1.959964 * sqrt(2)
  CHECK(pv.magnitudes[0] == doctest::Approx(2.771808).epsilon(1e-6));
  CHECK(pv.magnitudes[0] == pv.magnitudes[1]);

  Dataset flat;
  flat.features.resize(3, 1);
  flat.features << 7, 7, 7;
  flat.labels.resize(3);
  flat.labels << 1, -1, 1;
  CHECK(compute_perturbation(flat, 0, spec).is_zero());

  Dataset one;
  one.features.resize(1, 1);
  one.features << 1;
  one.labels.resize(1);
  one.labels << 1;
  CHECK_THROWS_AS(compute_perturbation(one, 0, spec), Error);
}

TEST_CASE("perturbation scales linearly with the feature") {
  SplitMix64 rng(5);
  Dataset ds = oracles::random_dataset(rng, 20, 3);
  NoiseSpec spec{NoiseFamily::StudentT, 5.0, 0.6};
  const double base = compute_perturbation(ds, 1, spec).magnitudes[0];
  ds.features.col(1) *= 3.5;
  const double scaled = compute_perturbation(ds, 1, spec).magnitudes[0];
  CHECK(std::fabs(scaled - 3.5 * base) < 1e-10 * std::max(1.0, scaled));
}

TEST_CASE("select_noisy_feature picks the largest-spread feature") {
  Dataset ds;
  ds.features.resize(3, 3);
  ds.features << 0, 0, 5, 0.1, 0, 6, 0.2, 0, 7;
  ds.labels.resize(3);
  ds.labels << 1, -1, 1;
  CHECK(select_noisy_feature(ds) == 2);

  // ties break to the lowest index
  Dataset tie;
  tie.features.resize(2, 2);
  tie.features << 0, 0, 1, 1;
  tie.labels.resize(2);
  tie.labels << 1, -1;
  CHECK(select_noisy_feature(tie) == 0);

  Dataset single;
  single.features.resize(2, 1);
  single.features << 0, 1;
  single.labels.resize(2);
  single.labels << 1, -1;
  CHECK(select_noisy_feature(single) == 0);
}
