#include "robsvm/qp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qp_internal.hpp"

namespace robsvm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void append_matrix(std::ostringstream& out, const Eigen::MatrixXd& M) {
  char buf[64];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

void append_vector(std::ostringstream& out, const Eigen::VectorXd& v) {
  char buf[64];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isinf(v[i]))
      out << (i ? " " : "") << (v[i] > 0 ? "inf" : "-inf");
    else {
      std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
      out << (i ? " " : "") << buf;
    }
  }
  out << '\n';
}
}  // namespace

void QuadraticProgram::validate() const {
  const Eigen::Index nv = n();
  require(nv >= 1, ErrorCode::InvalidArgument, "QP has no variables");
  require(Q.rows() == nv && Q.cols() == nv, ErrorCode::DimensionMismatch,
          "Q must be n x n");
  require(lower.size() == nv && upper.size() == nv, ErrorCode::DimensionMismatch,
          "bounds must have length n");
  require(A_eq.rows() == b_eq.size() && (A_eq.rows() == 0 || A_eq.cols() == nv),
          ErrorCode::DimensionMismatch, "equality block shapes inconsistent");
  require(A_in.rows() == b_in.size() && (A_in.rows() == 0 || A_in.cols() == nv),
          ErrorCode::DimensionMismatch, "inequality block shapes inconsistent");
  require(ridge >= 0.0, ErrorCode::InvalidArgument, "ridge must be >= 0");
  for (Eigen::Index i = 0; i < nv; ++i)
    require(lower[i] <= upper[i], ErrorCode::InvalidArgument,
            "lower bound exceeds upper bound");
  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  require((Q - Q.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          ErrorCode::InvalidArgument, "Q must be symmetric");
}

QuadraticProgram QuadraticProgram::unbounded(Eigen::MatrixXd Q, Eigen::VectorXd c) {
  QuadraticProgram qp;
  const Eigen::Index n = c.size();
  qp.Q = std::move(Q);
  qp.c = std::move(c);
  qp.A_eq.resize(0, n);
  qp.b_eq.resize(0);
  qp.A_in.resize(0, n);
  qp.b_in.resize(0);
  qp.lower = Eigen::VectorXd::Constant(n, -kInf);
  qp.upper = Eigen::VectorXd::Constant(n, kInf);
  return qp;
}

double QuadraticProgram::objective(const Eigen::VectorXd& x) const {
  return 0.5 * x.dot(Q * x) + c.dot(x);
}

std::string dump(const QuadraticProgram& qp) {
  std::ostringstream out;
  out << "robsvm-qp 1\n";
  out << "n " << qp.n() << '\n';
  out << "Q\n";
  append_matrix(out, qp.Q);
  out << "c\n";
  append_vector(out, qp.c);
  out << "eq " << qp.A_eq.rows() << '\n';
  append_matrix(out, qp.A_eq);
  if (qp.A_eq.rows() > 0) {
    out << "beq\n";
    append_vector(out, qp.b_eq);
  }
  out << "in " << qp.A_in.rows() << '\n';
  append_matrix(out, qp.A_in);
  if (qp.A_in.rows() > 0) {
    out << "bin\n";
    append_vector(out, qp.b_in);
  }
  out << "lower\n";
  append_vector(out, qp.lower);
  out << "upper\n";
  append_vector(out, qp.upper);
  return out.str();
}

namespace {

// Phase one: minimize the worst constraint violation t over the box.
// Strictly feasible by construction, so the IPM core always applies.
bool phase_one_feasible(const QuadraticProgram& qp, double tol_feas) {
  const Eigen::Index n = qp.n();
  const Eigen::Index p = qp.A_eq.rows(), q = qp.A_in.rows();
  if (p == 0 && q == 0) return true;  // box-only, validated lower <= upper

  QuadraticProgram lp;
  lp.Q = Eigen::MatrixXd::Zero(n + 1, n + 1);
  lp.c = Eigen::VectorXd::Zero(n + 1);
  lp.c[n] = 1.0;
  lp.A_eq.resize(0, n + 1);
  lp.b_eq.resize(0);
  lp.A_in.resize(2 * p + q, n + 1);
  lp.b_in.resize(2 * p + q);
  for (Eigen::Index i = 0; i < p; ++i) {
    lp.A_in.row(i).head(n) = qp.A_eq.row(i);
    lp.A_in(i, n) = -1.0;
    lp.b_in[i] = qp.b_eq[i];
    lp.A_in.row(p + i).head(n) = -qp.A_eq.row(i);
    lp.A_in(p + i, n) = -1.0;
    lp.b_in[p + i] = -qp.b_eq[i];
  }
  for (Eigen::Index i = 0; i < q; ++i) {
    lp.A_in.row(2 * p + i).head(n) = qp.A_in.row(i);
    lp.A_in(2 * p + i, n) = -1.0;
    lp.b_in[2 * p + i] = qp.b_in[i];
  }
  lp.lower.resize(n + 1);
  lp.upper.resize(n + 1);
  lp.lower.head(n) = qp.lower;
  lp.upper.head(n) = qp.upper;
  lp.lower[n] = -1.0;  // keeps the LP bounded below
  lp.upper[n] = kInf;

  SolveOptions opts;
  opts.tol_kkt = std::min(1e-9, 0.1 * tol_feas);
  opts.tol_feas = std::min(1e-10, 0.1 * tol_feas);
  opts.max_iter = 200;
  QPSolution sol = detail::ipm_solve(lp, opts);
  return sol.x[n] <= tol_feas;
}

}  // namespace

QPSolution solve(const QuadraticProgram& qp, double tol_kkt, double tol_feas,
                 int max_iter) {
  SolveOptions opts;
  opts.tol_kkt = tol_kkt;
  opts.tol_feas = tol_feas;
  opts.max_iter = max_iter;
  return solve(qp, opts);
}

QPSolution solve(const QuadraticProgram& qp, const SolveOptions& opts) {
  qp.validate();
  if (!opts.assume_feasible && !phase_one_feasible(qp, opts.tol_feas)) {
    QPSolution sol;
    sol.status = SolveStatus::Infeasible;
    sol.x = Eigen::VectorXd::Zero(qp.n());
    sol.objective = qp.objective(sol.x);
    sol.kkt_residual = std::numeric_limits<double>::infinity();
    sol.feasibility_residual = std::numeric_limits<double>::infinity();
    return sol;
  }
  return detail::ipm_solve(qp, opts);
}

}  // namespace robsvm
