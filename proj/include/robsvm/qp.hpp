#pragma once

#include <Eigen/Dense>
#include <string>

#include "robsvm/error.hpp"

namespace robsvm {

// Convex linearly-constrained quadratic program
//
//   minimize    0.5 x'Qx + c'x
//   subject to  A_eq x  = b_eq
//               A_in x <= b_in
//               lower <= x <= upper   (+/-inf entries allowed)
//
// Q must be symmetric positive semidefinite.
struct QuadraticProgram {
  Eigen::MatrixXd Q;
  Eigen::VectorXd c;
  Eigen::MatrixXd A_eq;   // p x n, may be 0 x n
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_in;   // q x n, may be 0 x n
  Eigen::VectorXd b_in;
  Eigen::VectorXd lower;  // -inf allowed
  Eigen::VectorXd upper;  // +inf allowed
  double ridge = 0.0;     // added to diag(Q) before solving

  Eigen::Index n() const { return c.size(); }
  void validate() const;

  // no bound constraints at all
  static QuadraticProgram unbounded(Eigen::MatrixXd Q, Eigen::VectorXd c);
  double objective(const Eigen::VectorXd& x) const;
};

enum class SolveStatus { Optimal, MaxIterations, Infeasible };

struct QPSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  // stationarity + complementarity, relative to problem scale
  double kkt_residual = 0.0;
  // worst absolute constraint violation
  double feasibility_residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIterations;
  // Lagrange multipliers (all nonnegative except eq)
  Eigen::VectorXd eq_multipliers;
  Eigen::VectorXd in_multipliers;
  Eigen::VectorXd lower_multipliers;
  Eigen::VectorXd upper_multipliers;
};

struct SolveOptions {
  double tol_kkt = 1e-6;
  double tol_feas = 1e-8;
  int max_iter = 50000;
  // skip the phase-one feasibility solve; for problems whose feasibility is
  // structural (all SVM duals trained here)
  bool assume_feasible = false;
};

// Primal-dual interior-point solve.  Infeasibility is detected by a
// preliminary phase-one solve (tolerance tol_feas).  On MaxIterations the
// best iterate found is returned with its honest residuals.
QPSolution solve(const QuadraticProgram& qp, double tol_kkt = 1e-6,
                 double tol_feas = 1e-8, int max_iter = 50000);
QPSolution solve(const QuadraticProgram& qp, const SolveOptions& opts);

// Fast path for the classical SVM dual structure
//
//   minimize    0.5 x'Qx + c'x
//   subject to  y'x = 0,  0 <= x <= C_upper
//
// solved by two-variable decomposition (SMO with second-order working-set
// selection).  Same solution contract as solve(); the kkt_residual is the
// maximal-violating-pair gap.
QPSolution solve_box_single_equality(const Eigen::MatrixXd& Q,
                                     const Eigen::VectorXd& c,
                                     const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& C_upper,
                                     double tol_kkt = 1e-6,
                                     int max_iter = 50000);

// Plain-text dump for debugging (--dump-qp); format in docs/formats.md.
std::string dump(const QuadraticProgram& qp);

}  // namespace robsvm
