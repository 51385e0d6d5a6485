#pragma once

// Test-only oracles.  Each one is an independent route to a value the
// library computes some other way; they are deliberately written in the
// most literal style possible.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "robsvm/dataset.hpp"
#include "robsvm/qp.hpp"
#include "robsvm/rng.hpp"

namespace oracles {

struct BruteForceResult {
  bool found = false;
  double objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;
};

// Brute-force LCQP oracle: enumerate every active subset of the inequality
// constraints (general rows and finite bounds), solve the resulting
// equality-constrained subproblem by a linear solve, and keep the feasible
// candidate with the smallest objective.  Exponential in the constraint
// count; fine for <= ~16 constraints.
inline BruteForceResult brute_force_qp(const robsvm::QuadraticProgram& qp) {
  const Eigen::Index n = qp.n();

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < qp.A_in.rows(); ++i) {
    rows.push_back(qp.A_in.row(i));
    rhs.push_back(qp.b_in[i]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(qp.lower[i])) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[i] = -1.0;
      rows.push_back(e);
      rhs.push_back(-qp.lower[i]);
    }
    if (std::isfinite(qp.upper[i])) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[i] = 1.0;
      rows.push_back(e);
      rhs.push_back(qp.upper[i]);
    }
  }
  const size_t m = rows.size();

  const Eigen::Index p = qp.A_eq.rows();
  BruteForceResult best;

  for (size_t mask = 0; mask < (size_t{1} << m); ++mask) {
    std::vector<size_t> active;
    for (size_t i = 0; i < m; ++i)
      if (mask & (size_t{1} << i)) active.push_back(i);
    const auto k = static_cast<Eigen::Index>(active.size());
    if (k + p > n) continue;  // more active constraints than dimensions

    Eigen::MatrixXd A(p + k, n);
    Eigen::VectorXd b(p + k);
    if (p > 0) {
      A.topRows(p) = qp.A_eq;
      b.head(p) = qp.b_eq;
    }
    for (Eigen::Index t = 0; t < k; ++t) {
      A.row(p + t) = rows[active[static_cast<size_t>(t)]].transpose();
      b[p + t] = rhs[active[static_cast<size_t>(t)]];
    }

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + p + k, n + p + k);
    kkt.topLeftCorner(n, n) = qp.Q;
    if (p + k > 0) {
      kkt.topRightCorner(n, p + k) = A.transpose();
      kkt.bottomLeftCorner(p + k, n) = A;
    }
    Eigen::VectorXd r(n + p + k);
    r.head(n) = -qp.c;
    r.tail(p + k) = b;

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(r);
    const Eigen::VectorXd x = sol.head(n);

    bool feasible = true;
    for (size_t i = 0; i < m && feasible; ++i)
      if (rows[i].dot(x) > rhs[i] + 1e-9) feasible = false;
    if (p > 0 && (qp.A_eq * x - qp.b_eq).cwiseAbs().maxCoeff() > 1e-9)
      feasible = false;
    if (!feasible) continue;

    const double obj = qp.objective(x);
    if (obj < best.objective) {
      best.found = true;
      best.objective = obj;
      best.x = x;
    }
  }
  return best;
}

// Gaussian quantile by plain bisection on the erfc-based CDF.
inline double gaussian_quantile_bisect(double p) {
  auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Scalar minimization of  z + sum(max(v_i - z, 0)) / (N (1 - alpha))  over a
// coarse grid refined by ternary search.
inline double eel_minimize_oracle(const Eigen::VectorXd& values, double alpha) {
  const double scale =
      static_cast<double>(values.size()) * (1.0 - alpha);
  auto f = [&](double z) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
      s += std::max(values[i] - z, 0.0);
    return z + s / scale;
  };
  double lo = values.minCoeff() - 1.0, hi = values.maxCoeff() + 1.0;
  double best_z = lo, best_f = f(lo);
  for (int i = 0; i <= 2000; ++i) {
    const double z = lo + (hi - lo) * static_cast<double>(i) / 2000.0;
    const double v = f(z);
    if (v < best_f) {
      best_f = v;
      best_z = z;
    }
  }
  double a = best_z - (hi - lo) / 2000.0, b = best_z + (hi - lo) / 2000.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (f(m1) < f(m2))
      b = m2;
    else
      a = m1;
  }
  return f(0.5 * (a + b));
}

// Random strictly convex QP instance with a single optional equality, a few
// general inequalities, and box bounds; at most `max_cons` inequality rows.
inline robsvm::QuadraticProgram random_qp(robsvm::SplitMix64& rng,
                                          Eigen::Index n, int n_general,
                                          bool with_equality) {
  auto u = [&]() { return 2.0 * rng.next_double() - 1.0; };
  robsvm::QuadraticProgram qp;
  Eigen::MatrixXd L(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) L(i, j) = u();
  qp.Q = L.transpose() * L + 0.3 * Eigen::MatrixXd::Identity(n, n);
  qp.c.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) qp.c[i] = 2.0 * u();

  if (with_equality) {
    qp.A_eq.resize(1, n);
    for (Eigen::Index j = 0; j < n; ++j) qp.A_eq(0, j) = u();
    qp.A_eq(0, 0) = 0.5 + 0.5 * rng.next_double();  // guarantees feasibility
    qp.b_eq.resize(1);
    qp.b_eq[0] = 0.5 * u();
  } else {
    qp.A_eq.resize(0, n);
    qp.b_eq.resize(0);
  }

  qp.A_in.resize(n_general, n);
  qp.b_in.resize(n_general);
  for (int i = 0; i < n_general; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) qp.A_in(i, j) = u();
    qp.b_in[i] = 1.0 + rng.next_double();  // keeps x = 0 strictly feasible
  }

  qp.lower = Eigen::VectorXd::Constant(n, -2.0);
  qp.upper = Eigen::VectorXd::Constant(n, 2.0);
  return qp;
}

// Random two-class dataset with both classes guaranteed.
inline robsvm::Dataset random_dataset(robsvm::SplitMix64& rng, Eigen::Index n,
                                      Eigen::Index d) {
  robsvm::Dataset ds;
  ds.features.resize(n, d);
  ds.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = i < 2 ? (i == 0 ? 1.0 : -1.0)  // both classes present
                           : (rng.next_bit() ? 1.0 : -1.0);
    ds.labels[i] = y;
    for (Eigen::Index j = 0; j < d; ++j)
      ds.features(i, j) = y * 0.5 + (2.0 * rng.next_double() - 1.0);
  }
  return ds;
}

}  // namespace oracles
