#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "robsvm/kernels.hpp"
#include "robsvm/rng.hpp"

using namespace robsvm;

TEST_CASE("kernel_eval basics") {
  Eigen::VectorXd x(2), y(2);
  x << 1, 2;
  y << 1, 2;
  CHECK(kernel_eval(KernelSpec::linear(), x, y) == 5.0);
  CHECK(kernel_eval(KernelSpec::rbf(3.7), x, y) == 1.0);

  Eigen::VectorXd a(1), b(1);
  a << 0;
  b << 1;
  CHECK(kernel_eval(KernelSpec::rbf(1.0), a, b) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  Eigen::VectorXd bad(3);
  CHECK_THROWS_AS(kernel_eval(KernelSpec::linear(), x, bad), Error);
  CHECK_THROWS_AS(KernelSpec::rbf(-1.0).validate(), Error);
}

TEST_CASE("gram matrices") {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  CHECK(gram(KernelSpec::linear(), I, I) == I);

  SplitMix64 rng(3);
  Eigen::MatrixXd A(5, 3);
  for (Eigen::Index i = 0; i < A.size(); ++i)
    A.data()[i] = 2.0 * rng.next_double() - 1.0;

  const Eigen::MatrixXd G = gram(KernelSpec::rbf(0.8), A, A);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(G(i, i) == 1.0);
  CHECK((G - G.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // PSD up to numerical jitter
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  CHECK(es.eigenvalues().minCoeff() > -1e-8 * G.trace());
}

TEST_CASE("perturbed_points shifts one coordinate") {
  Eigen::MatrixXd X(1, 2);
  X << 1, 2;
  Eigen::VectorXd a(1);
  a << 0.5;
  auto [minus, plus] = perturbed_points(X, 1, a);
  CHECK(minus(0, 1) == 1.5);
  CHECK(plus(0, 1) == 2.5);
  CHECK(minus(0, 0) == 1.0);

  auto [m0, p0] = perturbed_points(X, 0, Eigen::VectorXd::Zero(1));
  CHECK(m0 == X);
  CHECK(p0 == X);

  CHECK_THROWS_AS(perturbed_points(X, 5, a), Error);
}

TEST_CASE("linear kernel commutes with the input-space shift") {
  // k(x - a e_k, x') = k(x, x') - a x'_k for the linear kernel: the
  // input-space realization coincides with the synthetic-feature shift
  SplitMix64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd x(4), xp(4);
    for (int j = 0; j < 4; ++j) {
      x[j] = 2.0 * rng.next_double() - 1.0;
      xp[j] = 2.0 * rng.next_double() - 1.0;
    }
    const double a = rng.next_double();
    const Eigen::Index k = 2;
    Eigen::VectorXd shifted = x;
    shifted[k] -= a;
    const double lhs = kernel_eval(KernelSpec::linear(), shifted, xp);
    const double rhs = kernel_eval(KernelSpec::linear(), x, xp) - a * xp[k];
    CHECK(std::fabs(lhs - rhs) < 1e-12);
  }
}
