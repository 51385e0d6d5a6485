#include <cassert>
#include <cmath>
#include <limits>
#include <vector>

#include "qp_internal.hpp"

namespace robsvm::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot0(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() > 0 ? a.dot(b) : 0.0;
}

double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = 1.0 / 0.99;  // allows a full unit step after the 0.99 factor
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  return a;
}

// Equality-constrained case (no inequalities, no finite bounds): one
// saddle-point solve.  CompleteOrthogonalDecomposition yields a minimum-norm
// KKT point when Q is singular; any KKT point satisfies the contract.
QPSolution solve_equality_only(const QuadraticProgram& qp,
                               const Eigen::MatrixXd& Q,
                               const SolveOptions& opts) {
  const Eigen::Index n = qp.n(), p = qp.A_eq.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + p, n + p);
  K.topLeftCorner(n, n) = Q;
  if (p > 0) {
    K.topRightCorner(n, p) = qp.A_eq.transpose();
    K.bottomLeftCorner(p, n) = qp.A_eq;
  }
  Eigen::VectorXd rhs(n + p);
  rhs.head(n) = -qp.c;
  rhs.tail(p) = qp.b_eq;

  Eigen::VectorXd sol = K.completeOrthogonalDecomposition().solve(rhs);

  QPSolution out;
  out.x = sol.head(n);
  out.eq_multipliers = sol.tail(p);
  out.in_multipliers.resize(0);
  out.lower_multipliers = Eigen::VectorXd::Zero(n);
  out.upper_multipliers = Eigen::VectorXd::Zero(n);
  out.iterations = 1;
  out.objective = qp.objective(out.x);

  Eigen::VectorXd rd = Q * out.x + qp.c;
  if (p > 0) rd += qp.A_eq.transpose() * out.eq_multipliers;
  const double denom = 1.0 + std::max((Q * out.x).cwiseAbs().maxCoeff(),
                                      qp.c.cwiseAbs().maxCoeff());
  out.kkt_residual = rd.cwiseAbs().maxCoeff() / denom;
  out.feasibility_residual =
      p > 0 ? (qp.A_eq * out.x - qp.b_eq).cwiseAbs().maxCoeff() : 0.0;
  out.status = (out.kkt_residual <= opts.tol_kkt &&
                out.feasibility_residual <= opts.tol_feas)
                   ? SolveStatus::Optimal
                   : SolveStatus::MaxIterations;
  return out;
}

}  // namespace

// Mehrotra predictor-corrector on
//     min 0.5 x'Qx + c'x  s.t.  A_eq x = b_eq,  Gx + s = h,  s >= 0
// where G stacks A_in and the finite bounds.  Bound rows never enter the
// normal matrix densely; they only add to its diagonal.
QPSolution ipm_solve(const QuadraticProgram& qp, const SolveOptions& opts) {
  const Eigen::Index n = qp.n();
  const Eigen::Index p = qp.A_eq.rows();
  const Eigen::Index q = qp.A_in.rows();

  Eigen::MatrixXd Q = qp.Q;
  if (qp.ridge > 0.0) Q.diagonal().array() += qp.ridge;

  std::vector<Eigen::Index> lo_idx, up_idx;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(qp.lower[i])) lo_idx.push_back(i);
    if (std::isfinite(qp.upper[i])) up_idx.push_back(i);
  }
  const auto nl = static_cast<Eigen::Index>(lo_idx.size());
  const auto nu = static_cast<Eigen::Index>(up_idx.size());
  const Eigen::Index m_total = q + nl + nu;

  if (m_total == 0) return solve_equality_only(qp, Q, opts);

  // static regularization; scales with Q so minimizers are invariant under
  // positive rescaling of the objective
  const double delta = 1e-12 * (1.0 + Q.diagonal().cwiseAbs().mean());

  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool fl = std::isfinite(qp.lower[i]), fu = std::isfinite(qp.upper[i]);
    if (fl && fu)
      x[i] = 0.5 * (qp.lower[i] + qp.upper[i]);
    else if (fl)
      x[i] = qp.lower[i] + 1.0;
    else if (fu)
      x[i] = qp.upper[i] - 1.0;
    else
      x[i] = 0.0;
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(p);

  // slack/dual pairs: general rows, finite lower bounds, finite upper bounds
  Eigen::VectorXd s_g(q), s_l(nl), s_u(nu);
  if (q > 0) {
    const Eigen::VectorXd r = qp.b_in - qp.A_in * x;
    for (Eigen::Index i = 0; i < q; ++i) s_g[i] = std::max(r[i], 1.0);
  }
  for (Eigen::Index i = 0; i < nl; ++i)
    s_l[i] = std::max(x[lo_idx[i]] - qp.lower[lo_idx[i]], 1.0);
  for (Eigen::Index i = 0; i < nu; ++i)
    s_u[i] = std::max(qp.upper[up_idx[i]] - x[up_idx[i]], 1.0);
  Eigen::VectorXd z_g = Eigen::VectorXd::Ones(q);
  Eigen::VectorXd z_l = Eigen::VectorXd::Ones(nl);
  Eigen::VectorXd z_u = Eigen::VectorXd::Ones(nu);

  // G'v with G = [A_in; -I over lo_idx; +I over up_idx]
  auto mul_gt = [&](const Eigen::VectorXd& vg, const Eigen::VectorXd& vl,
                    const Eigen::VectorXd& vu) {
    Eigen::VectorXd out = q > 0 ? Eigen::VectorXd(qp.A_in.transpose() * vg)
                                : Eigen::VectorXd(Eigen::VectorXd::Zero(n));
    for (Eigen::Index i = 0; i < nl; ++i) out[lo_idx[i]] -= vl[i];
    for (Eigen::Index i = 0; i < nu; ++i) out[up_idx[i]] += vu[i];
    return out;
  };

  QPSolution best;
  best.x = x;
  double best_score = kInf;
  double initial_score = kInf;

  auto record = [&](int iter) {
    Eigen::VectorXd rd = Q * x + qp.c + mul_gt(z_g, z_l, z_u);
    if (p > 0) rd += qp.A_eq.transpose() * y;
    double feas = 0.0;
    if (p > 0) feas = (qp.A_eq * x - qp.b_eq).cwiseAbs().maxCoeff();
    if (q > 0) feas = std::max(feas, (qp.A_in * x - qp.b_in).maxCoeff());
    for (Eigen::Index i = 0; i < nl; ++i)
      feas = std::max(feas, qp.lower[lo_idx[i]] - x[lo_idx[i]]);
    for (Eigen::Index i = 0; i < nu; ++i)
      feas = std::max(feas, x[up_idx[i]] - qp.upper[up_idx[i]]);
    feas = std::max(feas, 0.0);

    const double obj = qp.objective(x);
    const double gap = dot0(s_g, z_g) + dot0(s_l, z_l) + dot0(s_u, z_u);
    const double denom = 1.0 + std::max((Q * x).cwiseAbs().maxCoeff(),
                                        qp.c.cwiseAbs().maxCoeff());
    const double kkt = std::max(rd.cwiseAbs().maxCoeff() / denom,
                                gap / (1.0 + std::fabs(obj)));

    const double score = std::max(feas / opts.tol_feas, kkt / opts.tol_kkt);
    if (iter == 0) initial_score = score;
    if (score < best_score) {
      best_score = score;
      best.x = x;
      best.objective = obj;
      best.kkt_residual = kkt;
      best.feasibility_residual = feas;
      best.eq_multipliers = y;
      best.in_multipliers = z_g;
      best.lower_multipliers = Eigen::VectorXd::Zero(n);
      best.upper_multipliers = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < nl; ++i)
        best.lower_multipliers[lo_idx[i]] = z_l[i];
      for (Eigen::Index i = 0; i < nu; ++i)
        best.upper_multipliers[up_idx[i]] = z_u[i];
    }
    return score <= 1.0;
  };

  int iter = 0;
  int stall = 0;
  double last_best = kInf;
  bool converged = record(0);

  Eigen::VectorXd dx, dy, dzg, dzl, dzu, dsg, dsl, dsu;

  while (!converged && iter < opts.max_iter) {
    ++iter;

    Eigen::MatrixXd M = Q;
    M.diagonal().array() += delta;
    if (q > 0) {
      const Eigen::VectorXd wg = z_g.cwiseQuotient(s_g);
      M.noalias() += qp.A_in.transpose() * wg.asDiagonal() * qp.A_in;
    }
    for (Eigen::Index i = 0; i < nl; ++i)
      M(lo_idx[i], lo_idx[i]) += z_l[i] / s_l[i];
    for (Eigen::Index i = 0; i < nu; ++i)
      M(up_idx[i], up_idx[i]) += z_u[i] / s_u[i];

    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
      // documented jitter policy: one ridge retry, then fail loudly
      M.diagonal().array() += 1e-10 * M.diagonal().cwiseAbs().mean();
      llt.compute(M);
      if (llt.info() != Eigen::Success)
        fail(ErrorCode::FactorizationFailed,
             "normal matrix factorization failed after ridge retry");
    }

    Eigen::MatrixXd K;  // M^{-1} A_eq'
    Eigen::LDLT<Eigen::MatrixXd> schur;
    if (p > 0) {
      K = llt.solve(qp.A_eq.transpose());
      Eigen::MatrixXd S = qp.A_eq * K;
      S.diagonal().array() += 1e-14 * (1.0 + S.diagonal().cwiseAbs().mean());
      schur.compute(S);
    }

    Eigen::VectorXd rd = Q * x + qp.c + mul_gt(z_g, z_l, z_u);
    if (p > 0) rd += qp.A_eq.transpose() * y;
    Eigen::VectorXd rp =
        p > 0 ? Eigen::VectorXd(qp.A_eq * x - qp.b_eq) : Eigen::VectorXd(0);
    Eigen::VectorXd rg_g = q > 0
                               ? Eigen::VectorXd(qp.A_in * x + s_g - qp.b_in)
                               : Eigen::VectorXd(0);
    Eigen::VectorXd rg_l(nl), rg_u(nu);
    for (Eigen::Index i = 0; i < nl; ++i)
      rg_l[i] = qp.lower[lo_idx[i]] - x[lo_idx[i]] + s_l[i];
    for (Eigen::Index i = 0; i < nu; ++i)
      rg_u[i] = x[up_idx[i]] - qp.upper[up_idx[i]] + s_u[i];

    const double mu = (dot0(s_g, z_g) + dot0(s_l, z_l) + dot0(s_u, z_u)) /
                      static_cast<double>(m_total);

    auto newton = [&](const Eigen::VectorXd& rc_g, const Eigen::VectorXd& rc_l,
                      const Eigen::VectorXd& rc_u) {
      Eigen::VectorXd tg(q), tl(nl), tu(nu);
      for (Eigen::Index i = 0; i < q; ++i)
        tg[i] = (z_g[i] * rg_g[i] - rc_g[i]) / s_g[i];
      for (Eigen::Index i = 0; i < nl; ++i)
        tl[i] = (z_l[i] * rg_l[i] - rc_l[i]) / s_l[i];
      for (Eigen::Index i = 0; i < nu; ++i)
        tu[i] = (z_u[i] * rg_u[i] - rc_u[i]) / s_u[i];
      const Eigen::VectorXd rhs = -rd - mul_gt(tg, tl, tu);

      if (p > 0) {
        const Eigen::VectorXd v = llt.solve(rhs);
        dy = schur.solve(qp.A_eq * v + rp);
        dx = v - K * dy;
      } else {
        dy.resize(0);
        dx = llt.solve(rhs);
      }

      dsg.resize(q);
      dzg.resize(q);
      if (q > 0) {
        const Eigen::VectorXd gdx = qp.A_in * dx;
        for (Eigen::Index i = 0; i < q; ++i) {
          dsg[i] = -rg_g[i] - gdx[i];
          dzg[i] = -(rc_g[i] + z_g[i] * dsg[i]) / s_g[i];
        }
      }
      dsl.resize(nl);
      dzl.resize(nl);
      for (Eigen::Index i = 0; i < nl; ++i) {
        dsl[i] = -rg_l[i] + dx[lo_idx[i]];
        dzl[i] = -(rc_l[i] + z_l[i] * dsl[i]) / s_l[i];
      }
      dsu.resize(nu);
      dzu.resize(nu);
      for (Eigen::Index i = 0; i < nu; ++i) {
        dsu[i] = -rg_u[i] - dx[up_idx[i]];
        dzu[i] = -(rc_u[i] + z_u[i] * dsu[i]) / s_u[i];
      }
    };

    // predictor
    newton(s_g.cwiseProduct(z_g), s_l.cwiseProduct(z_l), s_u.cwiseProduct(z_u));
    double ap = std::min({max_step(s_g, dsg), max_step(s_l, dsl),
                          max_step(s_u, dsu)});
    double ad = std::min({max_step(z_g, dzg), max_step(z_l, dzl),
                          max_step(z_u, dzu)});
    ap = std::min(1.0, 0.99 * ap);
    ad = std::min(1.0, 0.99 * ad);

    const double mu_aff = (dot0(s_g + ap * dsg, z_g + ad * dzg) +
                           dot0(s_l + ap * dsl, z_l + ad * dzl) +
                           dot0(s_u + ap * dsu, z_u + ad * dzu)) /
                          static_cast<double>(m_total);
    double sigma = mu > 0.0 ? std::pow(std::max(0.0, mu_aff / mu), 3) : 0.0;
    sigma = std::min(1.0, sigma);

    // corrector
    const double target = sigma * mu;
    newton(s_g.cwiseProduct(z_g) + dsg.cwiseProduct(dzg) -
               Eigen::VectorXd::Constant(q, target),
           s_l.cwiseProduct(z_l) + dsl.cwiseProduct(dzl) -
               Eigen::VectorXd::Constant(nl, target),
           s_u.cwiseProduct(z_u) + dsu.cwiseProduct(dzu) -
               Eigen::VectorXd::Constant(nu, target));
    ap = std::min({max_step(s_g, dsg), max_step(s_l, dsl),
                   max_step(s_u, dsu)});
    ad = std::min({max_step(z_g, dzg), max_step(z_l, dzl),
                   max_step(z_u, dzu)});
    ap = std::min(1.0, 0.99 * ap);
    ad = std::min(1.0, 0.99 * ad);

    x += ap * dx;
    if (p > 0) y += ad * dy;
    s_g += ap * dsg;
    s_l += ap * dsl;
    s_u += ap * dsu;
    z_g += ad * dzg;
    z_l += ad * dzl;
    z_u += ad * dzu;

    converged = record(iter);

    // stall guard: the residual score must keep decreasing
    if (best_score > 0.99 * last_best) {
      if (++stall >= 20) break;
    } else {
      stall = 0;
    }
    last_best = best_score;
  }

  best.status = converged ? SolveStatus::Optimal : SolveStatus::MaxIterations;
  // certified residual decrease over the run (debug builds)
  assert(best.status != SolveStatus::Optimal || !(best_score > initial_score));
  best.iterations = iter;
  return best;
}

}  // namespace robsvm::detail
